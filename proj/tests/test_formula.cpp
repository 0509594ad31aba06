#include <catch2/catch.hpp>

#include <random>

#include "modal/enumerate.hpp"
#include "modal/formula.hpp"
#include "support.hpp"

using namespace modal;

namespace {

bool contains(const std::vector<Formula>& pool, const std::string& printed) {
    for (const Formula& f : pool)
        if (print_formula(f) == printed) return true;
    return false;
}

}  // namespace

TEST_CASE("parse: grammar cases", "[formula]") {
    Formula f = parse_formula("<> true");
    CHECK(f.kind() == Formula::Kind::Dia);
    CHECK(f.child().kind() == Formula::Kind::Top);

    Formula g = parse_formula("!p & <> q");
    REQUIRE(g.kind() == Formula::Kind::And);
    REQUIRE(g.children().size() == 2);
    CHECK(g.children()[0].kind() == Formula::Kind::Not);
    CHECK(g.children()[0].child().atom_name() == "p");
    CHECK(g.children()[1].kind() == Formula::Kind::Dia);
    CHECK(g.children()[1].child().atom_name() == "q");

    Formula h = parse_formula("[] (p | q)");
    REQUIRE(h.kind() == Formula::Kind::Box);
    REQUIRE(h.child().kind() == Formula::Kind::Or);
    CHECK(h.child().children().size() == 2);
}

TEST_CASE("parse: flat n-ary vs explicit grouping", "[formula]") {
    Formula flat = parse_formula("a & b & c");
    REQUIRE(flat.kind() == Formula::Kind::And);
    CHECK(flat.children().size() == 3);

    Formula nested = parse_formula("a & (b & c)");
    REQUIRE(nested.kind() == Formula::Kind::And);
    REQUIRE(nested.children().size() == 2);
    CHECK(nested.children()[1].kind() == Formula::Kind::And);
    CHECK(flat != nested);

    // & binds tighter than |
    Formula mixed = parse_formula("p & q | r");
    REQUIRE(mixed.kind() == Formula::Kind::Or);
    CHECK(mixed.children()[0].kind() == Formula::Kind::And);
}

TEST_CASE("parse: errors carry a byte offset", "[formula]") {
    try {
        parse_formula("p & ");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse_formula("(p"), ParseError);
    CHECK_THROWS_AS(parse_formula("p q"), ParseError);
    CHECK_THROWS_AS(parse_formula(""), ParseError);
    CHECK_THROWS_AS(parse_formula("&p"), ParseError);
}

TEST_CASE("print: minimal parentheses", "[formula]") {
    CHECK(print_formula(Formula::dia(Formula::top())) == "<> true");
    CHECK(print_formula(Formula::conj({Formula::atom("p"), Formula::atom("q")})) ==
          "p & q");
    CHECK(print_formula(Formula::negate(Formula::dia(Formula::atom("p")))) ==
          "!<> p");
    CHECK(print_formula(Formula::negate(Formula::conj(
              {Formula::atom("p"), Formula::atom("q")}))) == "!(p & q)");
    CHECK(print_formula(Formula::disj(
              {Formula::conj({Formula::atom("p"), Formula::atom("q")}),
               Formula::atom("r")})) == "p & q | r");
}

TEST_CASE("print/parse round trip on handcrafted shapes", "[formula]") {
    for (const char* text :
         {"a & (b & c)", "(a | b) & c", "!!p", "!(p | q)", "<> (p & q)",
          "[] <> ![] p", "true | false | p", "a | (b | c)"}) {
        Formula f = parse_formula(text);
        CHECK(parse_formula(print_formula(f)) == f);
    }
}

TEST_CASE("modal_depth", "[formula]") {
    CHECK(modal_depth(Formula::atom("p")) == 0);
    CHECK(modal_depth(parse_formula("<> <> true")) == 2);
    CHECK(modal_depth(parse_formula("<> true & [] [] false")) == 2);
}

TEST_CASE("formula size counts nodes", "[formula]") {
    CHECK(formula_size(Formula::top()) == 1);
    CHECK(formula_size(parse_formula("!<> p")) == 3);
    CHECK(formula_size(parse_formula("p & q & r")) == 4);
}

TEST_CASE("smart constructors collapse degenerate arities", "[formula]") {
    CHECK(Formula::conj({}) == Formula::top());
    CHECK(Formula::disj({}) == Formula::bot());
    Formula p = Formula::atom("p");
    CHECK(Formula::conj({p}) == p);
    CHECK(Formula::disj({p}) == p);
}

TEST_CASE("canonical constructors sort and dedup", "[formula]") {
    Formula q = Formula::atom("q"), p = Formula::atom("p");
    Formula c = canonical_conj({q, p, q});
    REQUIRE(c.kind() == Formula::Kind::And);
    REQUIRE(c.children().size() == 2);
    CHECK(print_formula(c) == "p & q");
    CHECK(canonical_disj({p, p}) == p);
}

TEST_CASE("enumerate: smallest pools", "[formula]") {
    std::vector<Formula> none = enumerate_formulas(Alphabet{}, 0, 1);
    REQUIRE(none.size() == 2);
    CHECK(contains(none, "false"));
    CHECK(contains(none, "true"));

    std::vector<Formula> p02 = enumerate_formulas(Alphabet({"p"}), 0, 2);
    CHECK(contains(p02, "true"));
    CHECK(contains(p02, "false"));
    CHECK(contains(p02, "p"));
    CHECK(contains(p02, "!p"));
    for (const Formula& f : p02) CHECK(f.depth() == 0);

    std::vector<Formula> deep = enumerate_formulas(Alphabet{}, 2, 3);
    CHECK(contains(deep, "<> <> true"));
}

TEST_CASE("enumerate: bounds are respected and order is deterministic",
          "[formula]") {
    std::vector<Formula> pool = enumerate_formulas(Alphabet({"p"}), 1, 4);
    for (const Formula& f : pool) {
        CHECK(f.depth() <= 1);
        CHECK(f.size() <= 4);
    }
    std::vector<Formula> again = enumerate_formulas(Alphabet({"p"}), 1, 4);
    REQUIRE(pool.size() == again.size());
    for (std::size_t i = 0; i < pool.size(); ++i) CHECK(pool[i] == again[i]);
    // (depth, size, printed) order
    for (std::size_t i = 1; i < pool.size(); ++i) {
        const Formula &a = pool[i - 1], &b = pool[i];
        const auto ka = std::tuple(a.depth(), a.size(), print_formula(a));
        const auto kb = std::tuple(b.depth(), b.size(), print_formula(b));
        CHECK(ka < kb);
    }
}

TEST_CASE("enumerate: depth-1 completeness over {p}", "[formula]") {
    std::vector<Formula> pool = enumerate_formulas(Alphabet({"p"}), 1, 4);
    for (const char* expected :
         {"<> p", "[] p", "<> true", "[] false", "!<> p", "p & <> p",
          "p | [] p", "<> !p", "false & true", "!p & p"}) {
        Formula f = canonicalize(parse_formula(expected));
        const std::string canon = print_formula(f);
        INFO(canon);
        CHECK(contains(pool, canon));
    }
}

TEST_CASE("enumerate: round trip for every enumerated formula", "[formula]") {
    for (const Formula& f : enumerate_formulas(Alphabet({"p", "q"}), 1, 4)) {
        CHECK(parse_formula(print_formula(f)) == f);
    }
}

TEST_CASE("round trip on random formula trees", "[formula]") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 300; ++trial) {
        Formula f = support::random_formula(rng, {"p", "q", "rain"}, 18);
        Formula back = parse_formula(print_formula(f));
        CHECK(back == f);
        CHECK(modal_depth(back) == modal_depth(f));
        CHECK(formula_size(back) == formula_size(f));
    }
}

TEST_CASE("enumerate: cap and preconditions", "[formula]") {
    CHECK_THROWS_AS(enumerate_formulas(Alphabet({"p"}), 3, 8, 50),
                    ResourceError);
    CHECK_THROWS_AS(enumerate_formulas(Alphabet({"p"}), 1, 0),
                    std::invalid_argument);
}

TEST_CASE("proposition names must be grammar identifiers", "[formula]") {
    CHECK_THROWS_AS(Formula::atom("true"), ValidationError);
    CHECK_THROWS_AS(Formula::atom("2p"), ValidationError);
    CHECK_THROWS_AS(Alphabet({"false"}), ValidationError);
    CHECK_THROWS_AS(Alphabet({"a b"}), ValidationError);
    CHECK(Alphabet({"p_1", "_q"}).size() == 2);
}
