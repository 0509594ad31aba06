// ============================================================================
// modal/cli.hpp — command-line front end
// ============================================================================
//
// Subcommands: eval, bisim, distinguish, separate, define, equiv, lift,
// compare, oracle, game.  Inputs are file paths ("-" reads stdin); model and
// class files may be JSON or DSL (detected by the first character).  Output
// is a single JSON object per invocation (--format text for human-readable
// lines); the game subcommand speaks a line protocol on stdin/stdout.
//
// Exit codes: 0 any computed verdict (negative answers are data), 2 usage
// error, 3 parse/validation error, 4 resource-cap error.  Errors print one
// machine-readable JSON line on stderr.
//
// ============================================================================

#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modal/bisim.hpp"
#include "modal/classes.hpp"
#include "modal/enumerate.hpp"
#include "modal/formula.hpp"
#include "modal/games.hpp"
#include "modal/kripke.hpp"
#include "modal/kripke_io.hpp"
#include "modal/oracle.hpp"
#include "modal/semantics.hpp"

namespace modal::cli {

using nlohmann::json;

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
    if (path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline ModelClass load_class_auto(const std::string& path, std::istream& in) {
    const std::string text = read_input(path, in);
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return load_class(text,
                          c == '{' ? ClassFormat::Json : ClassFormat::Dsl);
    }
    throw ParseError(0, "empty input");
}

inline PointedModel load_model(const std::string& path, std::istream& in) {
    ModelClass c = load_class_auto(path, in);
    if (c.size() != 1)
        throw ValidationError("'" + path + "' must contain exactly one model");
    return c.members.front();
}

// Text rendering: one "key: value" line per field, keys in JSON (sorted)
// order.
inline void emit(const json& j, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << j.dump() << "\n";
        return;
    }
    for (const auto& [key, value] : j.items()) {
        if (value.is_string())
            out << key << ": " << value.get<std::string>() << "\n";
        else
            out << key << ": " << value.dump() << "\n";
    }
}

inline std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        out.push_back(static_cast<std::size_t>(std::stoull(cur)));
        cur.clear();
    };
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            cur += c;
        } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            throw ValidationError("bad subset index list '" + text + "'");
        }
    }
    flush();
    return out;
}

// ── game subcommand ─────────────────────────────────────────────────────────

struct GameIo {
    std::istream& in;
    std::ostream& out;
    std::string format;

    void line(const json& j, const std::string& text) const {
        if (format == "json")
            out << j.dump() << "\n";
        else
            out << text << "\n";
    }
};

inline json position_json(const GamePosition& g) {
    json j;
    if (!g.model_phase) {
        j["phase"] = "choose";
        j["c1_size"] = g.setup->c1.size();
        j["c2_size"] = g.setup->c2.size();
        j["to_move"] = "verifier";
        return j;
    }
    j["phase"] = "model";
    j["members"] = {g.mi, g.mj};
    j["left"] = g.left_model().model().state_name(g.left);
    j["right"] = g.right_model().model().state_name(g.right);
    j["elapsed"] = g.elapsed;
    if (g.setup->bound) j["rounds"] = *g.setup->bound;
    else j["rounds"] = "unbounded";
    if (g.pending) {
        j["pending"] = {{"side", g.pending->first ? "left" : "right"},
                        {"target", (g.pending->first
                                        ? g.left_model().model()
                                        : g.right_model().model())
                                       .state_name(g.pending->second)}};
        j["to_move"] = "verifier";
    } else {
        j["to_move"] = "spoiler";
    }
    return j;
}

inline std::string position_text(const GamePosition& g) {
    if (!g.model_phase)
        return "position: choose members (c1 has " +
               std::to_string(g.setup->c1.size()) + ", c2 has " +
               std::to_string(g.setup->c2.size()) + "); verifier to move";
    std::string s = "position: left=" +
                    g.left_model().model().state_name(g.left) +
                    " right=" + g.right_model().model().state_name(g.right) +
                    " elapsed=" + std::to_string(g.elapsed);
    if (g.pending)
        s += " pending=" + std::string(g.pending->first ? "left" : "right") +
             "->" +
             (g.pending->first ? g.left_model() : g.right_model())
                 .model()
                 .state_name(g.pending->second);
    s += g.pending || !g.model_phase ? "; verifier to move"
                                     : "; spoiler to move";
    return s;
}

inline json move_json(const GamePosition& g, const Move& m) {
    json j;
    switch (m.kind) {
        case Move::Kind::ChooseModels:
            j = {{"kind", "choose"}, {"i", m.i}, {"j", m.j}};
            break;
        case Move::Kind::SpoilerStep:
            j = {{"kind", "move"},
                 {"side", m.on_left ? "left" : "right"},
                 {"target", (m.on_left ? g.left_model() : g.right_model())
                                .model()
                                .state_name(m.target)}};
            break;
        case Move::Kind::VerifierStep: {
            const bool reply_left = g.pending && !g.pending->first;
            j = {{"kind", "move"},
                 {"side", reply_left ? "left" : "right"},
                 {"target", (reply_left ? g.left_model() : g.right_model())
                                .model()
                                .state_name(m.target)}};
            break;
        }
    }
    return j;
}

inline Move parse_user_move(const GamePosition& g, const std::string& line) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "choose") {
        std::size_t i = 0, j = 0;
        if (!(ss >> i >> j))
            throw IllegalMoveError("usage: choose <i> <j>");
        return Move::choose(i, j);
    }
    if (word != "move") throw IllegalMoveError("unknown command '" + word + "'");
    std::string side, state;
    ss >> side;
    if (side == "left" || side == "right") {
        if (!(ss >> state)) throw IllegalMoveError("usage: move <side> <state>");
    } else {
        state = side;  // "move <state>" shorthand for the forced reply side
        side.clear();
    }
    if (g.pending) {
        const bool reply_left = !g.pending->first;
        if (!side.empty() && (side == "left") != reply_left)
            throw IllegalMoveError("the answer must be on the " +
                                   std::string(reply_left ? "left" : "right") +
                                   " side");
        const KripkeModel& m =
            reply_left ? g.left_model().model() : g.right_model().model();
        auto idx = m.state_index(state);
        if (!idx) throw IllegalMoveError("'" + state + "' is not a state");
        return Move::verifier(*idx);
    }
    if (side.empty())
        throw IllegalMoveError("usage: move <left|right> <state>");
    const bool on_left = side == "left";
    const KripkeModel& m =
        on_left ? g.left_model().model() : g.right_model().model();
    auto idx = m.state_index(state);
    if (!idx) throw IllegalMoveError("'" + state + "' is not a state");
    return Move::spoiler(on_left, *idx);
}

inline int run_game(ModelClass c1, ModelClass c2, bool class_game,
                    Player user_role, RoundBound bound, const GameIo& io) {
    StepOutcome cur =
        class_game
            ? start_class_game(std::move(c1), std::move(c2), bound)
            : start_model_game(c1.members.front(), c2.members.front(), bound);

    while (!cur.terminal()) {
        const GamePosition& g = *cur.position;
        const Player to_move =
            g.verifier_to_move() ? Player::Verifier : Player::Spoiler;
        if (to_move != user_role) {
            Move m;
            if (!g.model_phase) {
                ClassGameResult r = class_game_winner(g.setup->c1, g.setup->c2);
                m = r.opening ? Move::choose(r.opening->first, r.opening->second)
                              : Move::choose(0, 0);
            } else {
                Strategy s(g.left_model(), g.right_model(), g.setup->bound);
                m = s.recommend(g);
            }
            io.line(json{{"engine_move", move_json(g, m)}},
                    "engine move: " + move_json(g, m).dump());
            cur = step(g, m);
            continue;
        }
        io.line(json{{"position", position_json(g)}}, position_text(g));
        std::string line;
        if (!std::getline(io.in, line)) return 0;
        if (line == "quit") return 0;
        if (line == "dump") {
            io.line(json{{"position", position_json(g)}}, position_text(g));
            continue;
        }
        if (line.empty()) continue;
        try {
            Move m = parse_user_move(g, line);
            cur = step(g, m);
        } catch (const IllegalMoveError& e) {
            io.line(json{{"error", "illegal-move"}, {"message", e.what()}},
                    std::string("illegal move: ") + e.what());
        }
    }
    io.line(json{{"winner", player_name(*cur.verdict)}},
            std::string("winner: ") + player_name(*cur.verdict));
    return 0;
}

}  // namespace detail

// Runs the command line given in `args` (without the program name).
// Streams are injected so the CLI is testable end to end.
inline int run_cli(std::vector<std::string> args, std::istream& in,
                   std::ostream& out, std::ostream& err) {
    CLI::App app{"distinguishability, class separation and definability "
                 "for finite Kripke models"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "json";
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->envname("MODALDIST_FORMAT");

    std::string m1, m2, c1, c2, universe, formula_text, subset_text, role;
    std::size_t k = 0, d1 = 0, d2 = 0, max_depth = 3, max_size_value = 0;
    std::size_t cap = kDefaultEnumerationCap;
    std::optional<std::size_t> max_size;
    std::string rounds_text = "unbounded";

    CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate a formula at a model's point");
    cmd_eval->add_option("--model", m1, "model file")->required();
    cmd_eval->add_option("--formula", formula_text, "formula text")->required();

    CLI::App* cmd_bisim = app.add_subcommand("bisim", "decide (k-)bisimilarity of two models");
    cmd_bisim->add_option("--m1", m1)->required();
    cmd_bisim->add_option("--m2", m2)->required();
    CLI::Option* bisim_k = cmd_bisim->add_option("--k", k, "round bound");

    CLI::App* cmd_dist = app.add_subcommand("distinguish", "synthesize a minimal-depth distinguishing formula");
    cmd_dist->add_option("--m1", m1)->required();
    cmd_dist->add_option("--m2", m2)->required();

    CLI::App* cmd_sep = app.add_subcommand("separate", "separate two classes or witness inseparability");
    cmd_sep->add_option("--c1", c1)->required();
    cmd_sep->add_option("--c2", c2)->required();

    CLI::App* cmd_def = app.add_subcommand("define", "define a subset of a universe of models");
    cmd_def->add_option("--universe", universe)->required();
    cmd_def->add_option("--subset", subset_text, "comma-separated member indices")->required();

    CLI::App* cmd_equiv = app.add_subcommand("equiv", "decide class equivalence");
    cmd_equiv->add_option("--c1", c1)->required();
    cmd_equiv->add_option("--c2", c2)->required();

    CLI::App* cmd_lift = app.add_subcommand("lift", "lifted relations between two classes");
    cmd_lift->add_option("--c1", c1)->required();
    cmd_lift->add_option("--c2", c2)->required();
    CLI::Option* lift_k = cmd_lift->add_option("--k", k, "use k-bisimilarity as the base relation");

    CLI::App* cmd_cmp = app.add_subcommand("compare", "compare two depth fragments over a universe");
    cmd_cmp->add_option("--universe", universe)->required();
    cmd_cmp->add_option("--d1", d1)->required();
    cmd_cmp->add_option("--d2", d2)->required();

    CLI::App* cmd_oracle = app.add_subcommand("oracle", "brute-force separability search");
    cmd_oracle->add_option("--c1", c1)->required();
    cmd_oracle->add_option("--c2", c2)->required();
    cmd_oracle->add_option("--max-depth", max_depth)->envname("MODALDIST_MAX_DEPTH");
    CLI::Option* oracle_size =
        cmd_oracle
            ->add_option("--max-size", max_size_value,
                         "formula size bound (omit for exhaustive)")
            ->envname("MODALDIST_MAX_SIZE");
    cmd_oracle->add_option("--cap", cap, "enumeration cap")->envname("MODALDIST_CAP");

    CLI::App* cmd_game = app.add_subcommand("game", "play the comparison game interactively");
    cmd_game->add_option("--m1", m1);
    cmd_game->add_option("--m2", m2);
    cmd_game->add_option("--c1", c1);
    cmd_game->add_option("--c2", c2);
    cmd_game->add_option("--role", role, "your role")
        ->check(CLI::IsMember({"spoiler", "verifier"}))
        ->required();
    cmd_game->add_option("--rounds", rounds_text, "N or 'unbounded'");

    try {
        std::vector<const char*> argv{"modaldist"};
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        json j;
        if (cmd_eval->parsed()) {
            PointedModel p = detail::load_model(m1, in);
            Formula f = parse_formula(formula_text);
            j["value"] = eval(p, f);
        } else if (cmd_bisim->parsed()) {
            PointedModel a = detail::load_model(m1, in);
            PointedModel b = detail::load_model(m2, in);
            if (bisim_k->count()) {
                j["k"] = k;
                j["k_bisimilar"] = k_bisimilar(a, b, k);
            } else {
                j["bisimilar"] = bisimilar(a, b);
            }
        } else if (cmd_dist->parsed()) {
            PointedModel a = detail::load_model(m1, in);
            PointedModel b = detail::load_model(m2, in);
            DistinguishResult r = distinguishing_formula(a, b);
            j["bisimilar"] = r.is_bisimilar();
            if (r.is_bisimilar()) {
                json w = json::array();
                for (const auto& [l, rr] : r.witness) w.push_back({l, rr});
                j["witness"] = std::move(w);
            } else {
                j["formula"] = print_formula(*r.formula);
                j["depth"] = r.depth;
            }
        } else if (cmd_sep->parsed()) {
            ModelClass a = detail::load_class_auto(c1, in);
            ModelClass b = detail::load_class_auto(c2, in);
            SeparationResult r = class_separation(a, b);
            j["separable"] = r.separable();
            if (r.separable()) {
                j["formula"] = print_formula(*r.separator);
                j["depth"] = r.depth;
                j["polarity"] = "forward";
            } else {
                j["witness"] = {r.witness->first, r.witness->second};
            }
        } else if (cmd_def->parsed()) {
            ModelClass u = detail::load_class_auto(universe, in);
            Definability r = definable(u, detail::parse_index_list(subset_text));
            j["definable"] = r.definable();
            if (r.definable()) j["formula"] = print_formula(*r.formula);
            else j["witness"] = {r.witness->first, r.witness->second};
        } else if (cmd_equiv->parsed()) {
            ModelClass a = detail::load_class_auto(c1, in);
            ModelClass b = detail::load_class_auto(c2, in);
            ClassEquivalence r = class_equiv(a, b);
            j["equivalent"] = r.equivalent;
            if (!r.equivalent) {
                j["witness"] = print_formula(*r.witness);
                j["valid_on"] = r.valid_on == 1 ? "c1" : "c2";
                j["unmatched_index"] = r.unmatched;
            }
        } else if (cmd_lift->parsed()) {
            ModelClass a = detail::load_class_auto(c1, in);
            ModelClass b = detail::load_class_auto(c2, in);
            std::optional<std::size_t> depth;
            if (lift_k->count()) {
                depth = k;
                j["k"] = k;
            }
            j["lift_exists"] = lift_exists(a, b, depth);
            j["lift_forall"] = lift_forall(a, b, depth);
        } else if (cmd_cmp->parsed()) {
            ModelClass u = detail::load_class_auto(universe, in);
            FragmentComparison r = compare_fragments(u, d1, d2);
            j["d1"] = d1;
            j["d2"] = d2;
            j["distinguishing"] = order_name(r.distinguishing);
            j["expressive"] = order_name(r.expressive);
        } else if (cmd_oracle->parsed()) {
            ModelClass a = detail::load_class_auto(c1, in);
            ModelClass b = detail::load_class_auto(c2, in);
            if (oracle_size->count()) max_size = max_size_value;
            auto r = oracle_separable(a, b, max_depth, max_size, cap);
            j["separable"] = r.has_value();
            if (r) {
                j["formula"] = print_formula(r->formula);
                j["depth"] = r->depth;
                j["polarity"] = sep_check(a, b, r->formula) == SepPolarity::Forward
                                    ? "forward"
                                    : "reverse";
            }
        } else if (cmd_game->parsed()) {
            const bool class_game = !c1.empty() || !c2.empty();
            if (class_game && (c1.empty() || c2.empty()))
                throw ValidationError("game needs both --c1 and --c2");
            if (!class_game && (m1.empty() || m2.empty()))
                throw ValidationError("game needs --m1/--m2 or --c1/--c2");
            RoundBound bound;
            if (rounds_text != "unbounded") {
                try {
                    bound = static_cast<std::size_t>(std::stoull(rounds_text));
                } catch (const std::exception&) {
                    throw ValidationError("--rounds must be a number or 'unbounded'");
                }
            }
            ModelClass a = class_game
                               ? detail::load_class_auto(c1, in)
                               : ModelClass{{detail::load_model(m1, in)}, {}};
            ModelClass b = class_game
                               ? detail::load_class_auto(c2, in)
                               : ModelClass{{detail::load_model(m2, in)}, {}};
            const Player user =
                role == "spoiler" ? Player::Spoiler : Player::Verifier;
            return detail::run_game(std::move(a), std::move(b), class_game,
                                    user, bound, {in, out, format});
        }
        detail::emit(j, format, out);
        return 0;
    } catch (const ParseError& e) {
        err << json{{"error", "parse"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        err << json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const EvalError& e) {
        err << json{{"error", "evaluation"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        err << json{{"error", "resource"}, {"message", e.what()}}.dump() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}

}  // namespace modal::cli
