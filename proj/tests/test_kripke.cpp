#include <catch2/catch.hpp>

#include "modal/bisim.hpp"
#include "modal/enumerate.hpp"
#include "modal/kripke.hpp"
#include "modal/kripke_io.hpp"
#include "modal/semantics.hpp"
#include "support.hpp"

using namespace modal;
using support::chain;
using support::loop;
using support::loop2;

static const char* kLoopJson =
    R"({"alphabet":[],"states":["a"],"rel":[["a","a"]],"val":{"a":[]},"point":"a"})";

TEST_CASE("load_class: json model", "[kripke]") {
    ModelClass c = load_class(kLoopJson, ClassFormat::Json);
    REQUIRE(c.size() == 1);
    const PointedModel& p = c.members[0];
    CHECK(p.model().num_states() == 1);
    CHECK(p.model().has_edge(0, 0));
    CHECK(p.model().valuation(0) == 0);
    CHECK(p.point_name() == "a");
}

TEST_CASE("load_class: undeclared relation endpoint", "[kripke]") {
    const char* bad =
        R"({"alphabet":[],"states":["s0"],"rel":[["s0","s1"]],"val":{"s0":[]},"point":"s0"})";
    CHECK_THROWS_AS(load_class(bad, ClassFormat::Json), ValidationError);
}

TEST_CASE("load_class: more validation failures", "[kripke]") {
    CHECK_THROWS_AS(
        load_class(R"({"states":["a"],"val":{"a":["p"]},"point":"a"})",
                   ClassFormat::Json),
        ValidationError);  // valuation outside the (empty) alphabet
    CHECK_THROWS_AS(load_class(R"({"states":["a","a"],"point":"a"})",
                               ClassFormat::Json),
                    ValidationError);  // duplicate state
    CHECK_THROWS_AS(load_class(R"({"states":["a"],"point":"b"})",
                               ClassFormat::Json),
                    ValidationError);  // point not a state
    CHECK_THROWS_AS(load_class("{", ClassFormat::Json), ParseError);
    CHECK_THROWS_AS(load_class(R"({"label":1,"models":[]})", ClassFormat::Json),
                    ValidationError);  // wrong field type
    CHECK_THROWS_AS(load_class(R"({"states":"a","point":"a"})",
                               ClassFormat::Json),
                    ValidationError);
}

TEST_CASE("load_class: dsl chain", "[kripke]") {
    const char* text = R"(
        model chain_2 {
          states: s0 s1 s2;
          rel: s0 -> s1, s1 -> s2;
          point: s0;
        }
    )";
    ModelClass c = load_class(text, ClassFormat::Dsl);
    REQUIRE(c.size() == 1);
    const KripkeModel& m = c.members[0].model();
    CHECK(m.num_states() == 3);
    CHECK(m.relation().size() == 2);
    CHECK(m.has_edge(0, 1));
    CHECK(m.has_edge(1, 2));
    CHECK(c.members[0].point() == 0);
}

TEST_CASE("load_class: dsl with label, valuations and comments", "[kripke]") {
    const char* text = R"(
        class demo;
        # a one-state model with p
        model m0 { states: a; rel: a -> a; val: a: p; point: a; }
        model m1 { states: a; rel: ; point: a; }
    )";
    ModelClass c = load_class(text, ClassFormat::Dsl);
    REQUIRE(c.size() == 2);
    CHECK(c.label == "demo");
    CHECK(c.members[0].model().alphabet().size() == 1);
    CHECK(c.members[0].model().valuation(0) == 1);
    CHECK(c.members[1].model().alphabet().size() == 0);
}

TEST_CASE("disjoint_union: member tagging", "[kripke]") {
    SECTION("singleton") {
        KripkeModel u = disjoint_union(support::cls({loop()}));
        CHECK(u.num_states() == 1);
        CHECK(u.state_name(0) == "0.a");
        CHECK(u.has_edge(0, 0));
    }
    SECTION("loop + chain_1") {
        KripkeModel u = disjoint_union(support::cls({loop(), chain(1)}));
        REQUIRE(u.num_states() == 3);
        CHECK(u.state_name(0) == "0.a");
        CHECK(u.state_name(1) == "1.s0");
        CHECK(u.state_name(2) == "1.s1");
        CHECK(u.relation() ==
              std::vector<std::pair<StateId, StateId>>{{0, 0}, {1, 2}});
    }
    SECTION("empty class") {
        KripkeModel u = disjoint_union(ModelClass{});
        CHECK(u.num_states() == 0);
    }
}

TEST_CASE("disjoint_union: alphabets merge, absent propositions false",
          "[kripke]") {
    PointedModel withP(support::mk_model({"p"}, {"x"}, {}, {1}), StateId{0});
    PointedModel withQ(support::mk_model({"q"}, {"y"}, {}, {1}), StateId{0});
    KripkeModel u = disjoint_union(support::cls({withP, withQ}));
    REQUIRE(u.alphabet().props() == std::vector<std::string>{"p", "q"});
    CHECK(u.valuation(0) == 0b01);  // x: p only
    CHECK(u.valuation(1) == 0b10);  // y: q only
}

TEST_CASE("unravel_to_depth", "[kripke]") {
    SECTION("loop to depth 2 is a 3-state path, 2-bisimilar to loop") {
        PointedModel t = unravel_to_depth(loop(), 2);
        CHECK(t.model().num_states() == 3);
        CHECK(t.model().relation().size() == 2);
        CHECK(k_bisimilar(t, loop(), 2));
        CHECK_FALSE(k_bisimilar(t, loop(), 3));
    }
    SECTION("depth 0 keeps only the point") {
        PointedModel p(support::mk_model({"p"}, {"x", "y"}, {{0, 1}}, {1, 0}),
                       StateId{0});
        PointedModel t = unravel_to_depth(p, 0);
        CHECK(t.model().num_states() == 1);
        CHECK(t.model().valuation(0) == 1);
    }
    SECTION("idempotent on shallow trees") {
        PointedModel t = unravel_to_depth(chain(1), 5);
        CHECK(t.model().num_states() == 2);
        CHECK(bisimilar(t, chain(1)));
    }
    SECTION("state cap") {
        PointedModel branchy(
            support::mk_model({}, {"a", "b"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}},
                              {0, 0}),
            StateId{0});
        CHECK_THROWS_AS(unravel_to_depth(branchy, 20, 100), ResourceError);
    }
}

TEST_CASE("unravel_to_depth: d-bisimilarity property", "[kripke]") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        PointedModel p = support::random_model(rng, 4, 1);
        for (std::size_t d = 0; d <= 3; ++d)
            CHECK(k_bisimilar(unravel_to_depth(p, d), p, d));
    }
}

TEST_CASE("generated_submodel", "[kripke]") {
    SECTION("chain_2 pointed at s1") {
        PointedModel p(chain(2).model(), StateId{1});
        PointedModel g = generated_submodel(p);
        CHECK(g.model().num_states() == 2);
        CHECK(g.model().state_name(g.point()) == "s1");
    }
    SECTION("loop unchanged") {
        PointedModel g = generated_submodel(loop());
        CHECK(g.model().num_states() == 1);
        CHECK(bisimilar(g, loop()));
    }
    SECTION("unreachable island removed, point theory unchanged") {
        // island: states i0 <-> i1 unreachable from the point
        PointedModel p(support::mk_model({"p"},
                                         {"s0", "s1", "i0", "i1"},
                                         {{0, 1}, {2, 3}, {3, 2}},
                                         {0, 1, 1, 0}),
                       StateId{0});
        PointedModel g = generated_submodel(p);
        CHECK(g.model().num_states() == 2);
        for (const Formula& f : enumerate_formulas(Alphabet({"p"}), 3, 4))
            CHECK(eval(g, f) == eval(p, f));
    }
}

TEST_CASE("generated_submodel: bisimilarity property", "[kripke]") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        PointedModel p = support::random_model(rng, 4, 1);
        CHECK(bisimilar(generated_submodel(p), p));
    }
}

TEST_CASE("disjoint_union preserves member evaluation", "[kripke]") {
    std::mt19937 rng(7);
    std::vector<Formula> pool = enumerate_formulas(Alphabet({"p"}), 2, 4);
    for (int trial = 0; trial < 10; ++trial) {
        ModelClass c = support::random_class(rng, 3, 3, 1);
        auto [u, offsets] = disjoint_union_indexed(c);
        for (std::size_t i = 0; i < c.size(); ++i) {
            PointedModel tagged(u, static_cast<StateId>(offsets[i]) +
                                       c.members[i].point());
            for (const Formula& f : pool)
                CHECK(eval(tagged, f) == eval(c.members[i], f));
        }
    }
}

TEST_CASE("save/load round trips", "[kripke]") {
    ModelClass two = support::cls({loop(), chain(2)}, "demo");
    for (ClassFormat fmt : {ClassFormat::Json, ClassFormat::Dsl}) {
        for (const ModelClass& c :
             {support::cls({loop()}), support::cls({chain(2)}), two}) {
            ModelClass back = load_class(save_class(c, fmt), fmt);
            REQUIRE(back.size() == c.size());
            CHECK(back.label == c.label);
            for (std::size_t i = 0; i < c.size(); ++i) {
                CHECK(back.members[i].model().states() ==
                      c.members[i].model().states());
                CHECK(back.members[i].model().relation() ==
                      c.members[i].model().relation());
                CHECK(back.members[i].model().valuations() ==
                      c.members[i].model().valuations());
                CHECK(back.members[i].point() == c.members[i].point());
            }
        }
    }
}

TEST_CASE("save_class is deterministic", "[kripke]") {
    ModelClass c = support::cls({loop(), chain(1)}, "walks");
    CHECK(save_class(c, ClassFormat::Json) == save_class(c, ClassFormat::Json));
    CHECK(save_class(c, ClassFormat::Dsl) == save_class(c, ClassFormat::Dsl));
}

TEST_CASE("parsers reject garbage with typed errors", "[kripke]") {
    std::mt19937 rng(2718);
    const std::string charset =
        "model class states rel val point {};:->,ab01 \n\"[]";
    std::uniform_int_distribution<std::size_t> pick(0, charset.size() - 1);
    std::uniform_int_distribution<std::size_t> len(0, 40);
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        for (std::size_t i = 0, n = len(rng); i < n; ++i)
            text += charset[pick(rng)];
        for (ClassFormat fmt : {ClassFormat::Json, ClassFormat::Dsl}) {
            try {
                load_class(text, fmt);
            } catch (const Error&) {
                // ParseError or ValidationError are both acceptable.
            }
        }
        try {
            parse_formula(text);
        } catch (const ParseError&) {
        }
    }
}

TEST_CASE("model invariants are validated", "[kripke]") {
    CHECK_THROWS_AS(PointedModel(support::mk_model({}, {"a"}, {}, {0}), 5),
                    ValidationError);
    CHECK_THROWS_AS(support::mk_model({}, {"a"}, {{0, 1}}, {0}),
                    ValidationError);
    CHECK_THROWS_AS(support::mk_model({"p"}, {"a"}, {}, {0b10}),
                    ValidationError);
    CHECK_THROWS_AS(Alphabet({"p", "p"}), ValidationError);
}
