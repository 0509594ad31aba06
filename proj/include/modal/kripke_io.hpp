// ============================================================================
// modal/kripke_io.hpp — model class serialization (JSON and DSL)
// ============================================================================
//
// JSON model:
//   {"alphabet":["p"],"states":["s0","s1"],"rel":[["s0","s1"]],
//    "val":{"s0":["p"],"s1":[]},"point":"s0"}
// JSON class:
//   {"label":"walks","models":[ <model>, ... ]}
// A bare model document loads as a one-member class.
//
// DSL: one block per model, whitespace-insensitive.
//   class walks;                      // optional label
//   model chain_1 {
//     states: s0 s1;
//     rel: s0 -> s1;
//     val: s0: p q;                   // one section per state; omitted = {}
//     point: s0;
//   }
// The alphabet is either declared with "alphabet: p q;" or inferred from the
// valuations in order of first mention.
//
// load_class o save_class is the identity; save_class output is
// deterministic (sorted JSON keys, fixed section order).
//
// ============================================================================

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "modal/kripke.hpp"

namespace modal {

enum class ClassFormat { Json, Dsl };

namespace detail {

// ── JSON ────────────────────────────────────────────────────────────────────

inline PointedModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("model must be a JSON object");
    for (const char* key : {"states", "point"})
        if (!j.contains(key))
            throw ValidationError(std::string("model is missing '") + key + "'");
    auto require_array = [&](const char* key) {
        if (j.contains(key) && !j.at(key).is_array())
            throw ValidationError(std::string("'") + key + "' must be an array");
    };
    require_array("alphabet");
    require_array("states");
    require_array("rel");
    if (j.contains("val") && !j.at("val").is_object())
        throw ValidationError("'val' must be an object");

    std::vector<std::string> props;
    if (j.contains("alphabet"))
        for (const auto& p : j.at("alphabet")) props.push_back(p.get<std::string>());
    Alphabet alphabet(std::move(props));

    std::vector<std::string> states;
    for (const auto& s : j.at("states")) states.push_back(s.get<std::string>());

    auto index_of_state = [&](const std::string& name) -> StateId {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == name) return static_cast<StateId>(i);
        throw ValidationError("'" + name + "' is not a declared state");
    };

    std::vector<std::pair<StateId, StateId>> rel;
    if (j.contains("rel"))
        for (const auto& e : j.at("rel")) {
            if (!e.is_array() || e.size() != 2)
                throw ValidationError("relation entries must be [from, to] pairs");
            rel.emplace_back(index_of_state(e.at(0).get<std::string>()),
                             index_of_state(e.at(1).get<std::string>()));
        }

    std::vector<PropMask> val(states.size(), 0);
    if (j.contains("val"))
        for (const auto& [name, list] : j.at("val").items()) {
            StateId s = index_of_state(name);
            PropMask mask = 0;
            for (const auto& p : list) {
                auto idx = alphabet.index_of(p.get<std::string>());
                if (!idx)
                    throw ValidationError("valuation proposition '" +
                                          p.get<std::string>() +
                                          "' is not in the alphabet");
                mask |= PropMask{1} << *idx;
            }
            val[static_cast<std::size_t>(s)] = mask;
        }

    KripkeModel m(std::move(alphabet), std::move(states), std::move(rel),
                  std::move(val));
    return PointedModel(std::move(m), j.at("point").get<std::string>());
}

inline nlohmann::json model_to_json(const PointedModel& p) {
    const KripkeModel& m = p.model();
    nlohmann::json j;
    j["alphabet"] = m.alphabet().props();
    j["states"] = m.states();
    nlohmann::json rel = nlohmann::json::array();
    for (auto [a, b] : m.relation())
        rel.push_back({m.state_name(a), m.state_name(b)});
    j["rel"] = std::move(rel);
    nlohmann::json val = nlohmann::json::object();
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        std::vector<std::string> props;
        for (std::size_t i = 0; i < m.alphabet().size(); ++i)
            if (m.valuation(static_cast<StateId>(s)) & (PropMask{1} << i))
                props.push_back(m.alphabet().name(i));
        val[m.state_name(static_cast<StateId>(s))] = props;
    }
    j["val"] = std::move(val);
    j["point"] = p.point_name();
    return j;
}

// ── DSL ─────────────────────────────────────────────────────────────────────

class DslParser {
public:
    explicit DslParser(std::string_view text) : text_(text) {}

    ModelClass parse() {
        ModelClass c;
        skip_ws();
        if (peek_word() == "class") {
            expect_word("class");
            c.label = expect_ident("class label");
            expect(";");
        }
        skip_ws();
        while (pos_ < text_.size()) {
            c.members.push_back(parse_model());
            skip_ws();
        }
        return c;
    }

private:
    struct RawModel {
        std::vector<std::string> alphabet;
        std::vector<std::string> states;
        std::vector<std::pair<std::string, std::string>> rel;
        std::vector<std::pair<std::string, std::vector<std::string>>> val;
        std::string point;
        bool has_point = false;
        bool has_alphabet = false;
    };

    PointedModel parse_model() {
        expect_word("model");
        expect_ident("model name");
        expect("{");
        RawModel r;
        skip_ws();
        while (!try_eat("}")) {
            std::string section = expect_ident("section name");
            expect(":");
            if (section == "states") {
                while (!try_eat(";")) r.states.push_back(expect_ident("state name"));
            } else if (section == "alphabet") {
                r.has_alphabet = true;
                while (!try_eat(";")) r.alphabet.push_back(expect_ident("proposition"));
            } else if (section == "rel") {
                if (!try_eat(";")) {
                    do {
                        std::string a = expect_ident("state name");
                        expect("->");
                        std::string b = expect_ident("state name");
                        r.rel.emplace_back(std::move(a), std::move(b));
                    } while (try_eat(","));
                    expect(";");
                }
            } else if (section == "val") {
                std::string s = expect_ident("state name");
                expect(":");
                std::vector<std::string> props;
                while (!try_eat(";")) props.push_back(expect_ident("proposition"));
                r.val.emplace_back(std::move(s), std::move(props));
            } else if (section == "point") {
                r.point = expect_ident("state name");
                r.has_point = true;
                expect(";");
            } else {
                throw ParseError(pos_, "unknown section '" + section + "'");
            }
            skip_ws();
        }
        return build(r);
    }

    PointedModel build(const RawModel& r) {
        if (!r.has_point) throw ValidationError("model is missing 'point'");
        std::vector<std::string> props = r.alphabet;
        if (!r.has_alphabet)
            for (const auto& [_, list] : r.val)
                for (const std::string& p : list)
                    if (std::find(props.begin(), props.end(), p) == props.end())
                        props.push_back(p);
        Alphabet alphabet(std::move(props));

        auto index_of_state = [&](const std::string& name) -> StateId {
            for (std::size_t i = 0; i < r.states.size(); ++i)
                if (r.states[i] == name) return static_cast<StateId>(i);
            throw ValidationError("'" + name + "' is not a declared state");
        };
        std::vector<std::pair<StateId, StateId>> rel;
        for (const auto& [a, b] : r.rel)
            rel.emplace_back(index_of_state(a), index_of_state(b));
        std::vector<PropMask> val(r.states.size(), 0);
        for (const auto& [s, list] : r.val) {
            PropMask mask = 0;
            for (const std::string& p : list) {
                auto idx = alphabet.index_of(p);
                if (!idx)
                    throw ValidationError("valuation proposition '" + p +
                                          "' is not in the alphabet");
                mask |= PropMask{1} << *idx;
            }
            val[static_cast<std::size_t>(index_of_state(s))] = mask;
        }
        StateId point = index_of_state(r.point);
        return PointedModel(KripkeModel(std::move(alphabet), r.states,
                                        std::move(rel), std::move(val)),
                            point);
    }

    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string peek_word() {
        skip_ws();
        std::size_t i = pos_;
        while (i < text_.size() && ident_char(text_[i])) ++i;
        return std::string(text_.substr(pos_, i - pos_));
    }

    void expect_word(std::string_view w) {
        if (peek_word() != w)
            throw ParseError(pos_, "expected '" + std::string(w) + "'");
        pos_ += w.size();
    }

    std::string expect_ident(const std::string& what) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        if (pos_ == start) throw ParseError(pos_, "expected " + what);
        return std::string(text_.substr(start, pos_ - start));
    }

    bool try_eat(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!try_eat(tok))
            throw ParseError(pos_, "expected '" + std::string(tok) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline std::string model_to_dsl(const PointedModel& p, const std::string& name) {
    const KripkeModel& m = p.model();
    std::string out = "model " + name + " {\n";
    out += "  alphabet:";
    for (const std::string& prop : m.alphabet().props()) out += " " + prop;
    out += ";\n  states:";
    for (const std::string& s : m.states()) out += " " + s;
    out += ";\n  rel:";
    bool first = true;
    for (auto [a, b] : m.relation()) {
        out += first ? " " : ", ";
        first = false;
        out += m.state_name(a) + " -> " + m.state_name(b);
    }
    out += ";\n";
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        if (m.valuation(static_cast<StateId>(s)) == 0) continue;
        out += "  val: " + m.state_name(static_cast<StateId>(s)) + ":";
        for (std::size_t i = 0; i < m.alphabet().size(); ++i)
            if (m.valuation(static_cast<StateId>(s)) & (PropMask{1} << i))
                out += " " + m.alphabet().name(i);
        out += ";\n";
    }
    out += "  point: " + p.point_name() + ";\n}\n";
    return out;
}

}  // namespace detail

inline ModelClass load_class(std::string_view text, ClassFormat format) {
    if (format == ClassFormat::Dsl) return detail::DslParser(text).parse();

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.byte, e.what());
    }
    try {
        ModelClass c;
        if (j.is_object() && j.contains("models")) {
            if (j.contains("label") && !j.at("label").is_null())
                c.label = j.at("label").get<std::string>();
            for (const auto& jm : j.at("models"))
                c.members.push_back(detail::model_from_json(jm));
        } else {
            c.members.push_back(detail::model_from_json(j));
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(e.what());
    }
}

inline std::string save_class(const ModelClass& c, ClassFormat format) {
    if (format == ClassFormat::Json) {
        nlohmann::json j;
        if (c.label) j["label"] = *c.label;
        nlohmann::json models = nlohmann::json::array();
        for (const PointedModel& m : c.members)
            models.push_back(detail::model_to_json(m));
        j["models"] = std::move(models);
        return j.dump(2) + "\n";
    }
    std::string out;
    if (c.label) out += "class " + *c.label + ";\n";
    for (std::size_t i = 0; i < c.members.size(); ++i)
        out += detail::model_to_dsl(c.members[i], "m" + std::to_string(i));
    return out;
}

}  // namespace modal
