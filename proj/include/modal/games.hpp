// ============================================================================
// modal/games.hpp — bisimulation games and the class comparison game
// ============================================================================
//
// Model comparison game on a pair of pointed models: each round Spoiler
// moves along an edge on one side, Verifier must answer on the other;
// Spoiler wins on a valuation mismatch or a stuck Verifier, Verifier wins a
// stuck Spoiler, an exhausted round bound, or an infinite play.
//
// The class comparison game prepends one Verifier move: choosing a member
// from each class; the model game is then played on the chosen pair.
//
// Winners are computed by a fixpoint over cross pairs (Verifier survives k
// rounds at (s,t) iff valuations match and every Spoiler move has an answer
// surviving k-1), which is deliberately a different computation from the
// partition refinement in bisim.hpp.
//
// ============================================================================

#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modal/errors.hpp"
#include "modal/kripke.hpp"

namespace modal {

enum class Player { Verifier, Spoiler };

inline const char* player_name(Player p) {
    return p == Player::Verifier ? "verifier" : "spoiler";
}

// Number of rounds; nullopt plays unbounded.
using RoundBound = std::optional<std::size_t>;

namespace detail {

inline constexpr std::size_t kNoWin = std::numeric_limits<std::size_t>::max();

// win[k][l * rc + r]: Verifier survives the k-round game from the pair
// (left state l, right state r).  The last level is the fixpoint, i.e. the
// unbounded game.
struct GameTables {
    PairView view;
    std::size_t lc = 0, rc = 0;
    std::vector<std::vector<char>> win;

    const std::vector<StateId>& left_succ(StateId l) const {
        return view.succ[static_cast<std::size_t>(l)];
    }
    const std::vector<StateId>& right_succ(StateId r) const {
        return view.succ[view.left_count + static_cast<std::size_t>(r)];
    }

    bool wins(StateId l, StateId r, std::size_t level) const {
        const std::size_t k = std::min(level, win.size() - 1);
        return win[k][static_cast<std::size_t>(l) * rc +
                      static_cast<std::size_t>(r)] != 0;
    }
    bool wins_unbounded(StateId l, StateId r) const {
        return wins(l, r, win.size() - 1);
    }
    bool wins_bound(StateId l, StateId r, RoundBound rounds) const {
        return rounds ? wins(l, r, *rounds) : wins_unbounded(l, r);
    }

    // Rounds Spoiler needs to win from (l, r); kNoWin if Verifier survives
    // forever.
    std::size_t spoiler_need(StateId l, StateId r) const {
        for (std::size_t k = 0; k < win.size(); ++k)
            if (!wins(l, r, k)) return k;
        return kNoWin;
    }
};

inline GameTables make_game_tables(const PointedModel& p1,
                                   const PointedModel& p2) {
    GameTables t;
    t.view = make_pair_view(p1, p2);
    t.lc = t.view.left_count;
    t.rc = t.view.succ.size() - t.view.left_count;

    std::vector<char> level(t.lc * t.rc, 0);
    for (std::size_t l = 0; l < t.lc; ++l)
        for (std::size_t r = 0; r < t.rc; ++r)
            level[l * t.rc + r] = t.view.val[l] == t.view.val[t.lc + r];
    t.win.push_back(level);

    for (;;) {
        const std::vector<char>& prev = t.win.back();
        std::vector<char> next(t.lc * t.rc, 0);
        bool changed = false;
        for (std::size_t l = 0; l < t.lc; ++l)
            for (std::size_t r = 0; r < t.rc; ++r) {
                const std::size_t at = l * t.rc + r;
                if (!t.win.front()[at]) continue;
                bool ok = true;
                for (StateId l2 : t.left_succ(static_cast<StateId>(l))) {
                    bool answered = false;
                    for (StateId r2 : t.right_succ(static_cast<StateId>(r)))
                        if (prev[static_cast<std::size_t>(l2) * t.rc +
                                 static_cast<std::size_t>(r2 -
                                                          static_cast<StateId>(
                                                              t.lc))]) {
                            answered = true;
                            break;
                        }
                    if (!answered) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    for (StateId r2 : t.right_succ(static_cast<StateId>(r))) {
                        bool answered = false;
                        for (StateId l2 : t.left_succ(static_cast<StateId>(l)))
                            if (prev[static_cast<std::size_t>(l2) * t.rc +
                                     static_cast<std::size_t>(
                                         r2 - static_cast<StateId>(t.lc))]) {
                                answered = true;
                                break;
                            }
                        if (!answered) {
                            ok = false;
                            break;
                        }
                    }
                next[at] = ok;
                changed |= next[at] != prev[at];
            }
        if (!changed) break;
        t.win.push_back(std::move(next));
    }
    return t;
}

inline bool valuations_match(const PointedModel& a, StateId s,
                             const PointedModel& b, StateId t) {
    Alphabet merged =
        Alphabet::merged(a.model().alphabet(), b.model().alphabet());
    return remap_valuation(a.model().valuation(s), a.model().alphabet(),
                           merged) ==
           remap_valuation(b.model().valuation(t), b.model().alphabet(),
                           merged);
}

}  // namespace detail

// ── Winner computation ──────────────────────────────────────────────────────

inline Player game_winner(const PointedModel& p1, const PointedModel& p2,
                          RoundBound rounds) {
    detail::GameTables t = detail::make_game_tables(p1, p2);
    return t.wins_bound(p1.point(), p2.point(), rounds) ? Player::Verifier
                                                        : Player::Spoiler;
}

struct ClassGameResult {
    Player winner;
    // Verifier's winning opening (member of c1, member of c2), when he wins.
    std::optional<std::pair<std::size_t, std::size_t>> opening;
};

// Verifier first chooses a member from each class, then the unbounded model
// game is played on the chosen pair.  An empty class leaves Verifier stuck
// on his opening move.
inline ClassGameResult class_game_winner(const ModelClass& c1,
                                         const ModelClass& c2) {
    for (std::size_t i = 0; i < c1.size(); ++i)
        for (std::size_t j = 0; j < c2.size(); ++j)
            if (game_winner(c1.members[i], c2.members[j], std::nullopt) ==
                Player::Verifier)
                return {Player::Verifier, {{i, j}}};
    return {Player::Spoiler, std::nullopt};
}

// ── Stepwise play ───────────────────────────────────────────────────────────

struct Move {
    enum class Kind { ChooseModels, SpoilerStep, VerifierStep };
    Kind kind = Kind::SpoilerStep;
    std::size_t i = 0, j = 0;  // ChooseModels: member indices
    bool on_left = false;      // SpoilerStep: which side the edge is taken on
    StateId target = 0;        // SpoilerStep / VerifierStep: edge target

    static Move choose(std::size_t i, std::size_t j) {
        return {Kind::ChooseModels, i, j, false, 0};
    }
    static Move spoiler(bool on_left, StateId target) {
        return {Kind::SpoilerStep, 0, 0, on_left, target};
    }
    static Move verifier(StateId target) {
        return {Kind::VerifierStep, 0, 0, false, target};
    }
};

struct GameSetup {
    ModelClass c1, c2;
    RoundBound bound;
};

struct GamePosition {
    std::shared_ptr<const GameSetup> setup;
    // Class-choice phase when false: Verifier must pick the two models.
    bool model_phase = false;
    std::size_t mi = 0, mj = 0;
    StateId left = 0, right = 0;
    std::size_t elapsed = 0;
    // Mid-round: Spoiler has moved (side, target) and awaits the answer.
    std::optional<std::pair<bool, StateId>> pending;

    const PointedModel& left_model() const { return setup->c1.members[mi]; }
    const PointedModel& right_model() const { return setup->c2.members[mj]; }
    bool verifier_to_move() const {
        return !model_phase || pending.has_value();
    }
};

struct StepOutcome {
    std::optional<GamePosition> position;
    std::optional<Player> verdict;

    bool terminal() const { return verdict.has_value(); }
};

namespace detail {

// Checks run whenever a round starts at the current pair: valuation
// mismatch, exhausted bound, stuck Spoiler.
inline StepOutcome enter_pair(GamePosition g) {
    if (!valuations_match(g.left_model(), g.left, g.right_model(), g.right))
        return {std::nullopt, Player::Spoiler};
    if (g.setup->bound && g.elapsed >= *g.setup->bound)
        return {std::nullopt, Player::Verifier};
    if (g.left_model().model().successors(g.left).empty() &&
        g.right_model().model().successors(g.right).empty())
        return {std::nullopt, Player::Verifier};
    return {std::move(g), std::nullopt};
}

}  // namespace detail

inline StepOutcome start_class_game(ModelClass c1, ModelClass c2,
                                    RoundBound bound) {
    if (c1.empty() || c2.empty()) return {std::nullopt, Player::Spoiler};
    GamePosition g;
    g.setup = std::make_shared<const GameSetup>(
        GameSetup{std::move(c1), std::move(c2), bound});
    return {std::move(g), std::nullopt};
}

inline StepOutcome start_model_game(PointedModel p1, PointedModel p2,
                                    RoundBound bound) {
    GamePosition g;
    ModelClass c1{{std::move(p1)}, std::nullopt};
    ModelClass c2{{std::move(p2)}, std::nullopt};
    g.setup = std::make_shared<const GameSetup>(
        GameSetup{std::move(c1), std::move(c2), bound});
    g.model_phase = true;
    g.left = g.left_model().point();
    g.right = g.right_model().point();
    return detail::enter_pair(std::move(g));
}

inline StepOutcome step(const GamePosition& g, const Move& m) {
    if (!g.model_phase) {
        if (m.kind != Move::Kind::ChooseModels)
            throw IllegalMoveError("a choose move is required first");
        if (m.i >= g.setup->c1.size() || m.j >= g.setup->c2.size())
            throw IllegalMoveError("chosen member index out of range");
        GamePosition next = g;
        next.model_phase = true;
        next.mi = m.i;
        next.mj = m.j;
        next.left = next.left_model().point();
        next.right = next.right_model().point();
        next.elapsed = 0;
        return detail::enter_pair(std::move(next));
    }
    if (!g.pending) {
        if (m.kind != Move::Kind::SpoilerStep)
            throw IllegalMoveError("it is Spoiler's turn to move");
        const KripkeModel& side =
            m.on_left ? g.left_model().model() : g.right_model().model();
        const StateId from = m.on_left ? g.left : g.right;
        if (!side.has_edge(from, m.target))
            throw IllegalMoveError(
                "chosen successor is not reachable from the current " +
                std::string(m.on_left ? "left" : "right") + " state");
        const KripkeModel& other =
            m.on_left ? g.right_model().model() : g.left_model().model();
        const StateId other_from = m.on_left ? g.right : g.left;
        if (other.successors(other_from).empty())
            return {std::nullopt, Player::Spoiler};  // Verifier is stuck
        GamePosition next = g;
        next.pending = {{m.on_left, m.target}};
        return {std::move(next), std::nullopt};
    }
    if (m.kind != Move::Kind::VerifierStep)
        throw IllegalMoveError("it is Verifier's turn to answer");
    const bool spoiler_left = g.pending->first;
    const KripkeModel& side =
        spoiler_left ? g.right_model().model() : g.left_model().model();
    const StateId from = spoiler_left ? g.right : g.left;
    if (!side.has_edge(from, m.target))
        throw IllegalMoveError(
            "chosen successor is not reachable from the current " +
            std::string(spoiler_left ? "right" : "left") + " state");
    GamePosition next = g;
    next.left = spoiler_left ? g.pending->second : m.target;
    next.right = spoiler_left ? m.target : g.pending->second;
    next.pending.reset();
    next.elapsed = g.elapsed + 1;
    return detail::enter_pair(std::move(next));
}

// ── Strategy extraction ─────────────────────────────────────────────────────

// Queryable strategy for the winner of the model game on (p1, p2).  From
// any position reached by following it, the recommended moves win against
// every opposing line; a winning Spoiler needs at most as many rounds as
// the least k at which the models fail to be k-bisimilar.
class Strategy {
public:
    Strategy(const PointedModel& p1, const PointedModel& p2, RoundBound bound)
        : tables_(detail::make_game_tables(p1, p2)), bound_(bound) {
        player_ = tables_.wins_bound(p1.point(), p2.point(), bound)
                      ? Player::Verifier
                      : Player::Spoiler;
    }

    Player player() const noexcept { return player_; }

    // Recommended move for whichever player is to move at `g`.  Following
    // the recommendations from the start as player() wins against every
    // opposing line.
    Move recommend(const GamePosition& g) const {
        if (!g.model_phase)
            throw IllegalMoveError("strategy covers the model game only");
        if (!g.pending) return spoiler_move(g.left, g.right);
        const std::size_t remaining =
            bound_ ? *bound_ - std::min(g.elapsed, *bound_) : detail::kNoWin;
        return verifier_move(g, remaining);
    }

private:
    Move spoiler_move(StateId l, StateId r) const {
        const std::size_t need = tables_.spoiler_need(l, r);
        // In a lost (or already-won) position fall back to the first edge.
        auto first_edge = [&]() -> Move {
            if (!tables_.left_succ(l).empty())
                return Move::spoiler(true, tables_.left_succ(l).front());
            if (!tables_.right_succ(r).empty())
                return Move::spoiler(false, tables_.right_succ(r).front());
            throw IllegalMoveError("no move available");
        };
        if (need == detail::kNoWin || need == 0) return first_edge();
        for (StateId l2 : tables_.left_succ(l)) {
            bool winning = true;
            for (StateId r2 : tables_.right_succ(r))
                if (tables_.spoiler_need(
                        l2, r2 - static_cast<StateId>(tables_.lc)) >= need)
                    winning = false;
            if (winning) return Move::spoiler(true, l2);
        }
        for (StateId r2 : tables_.right_succ(r)) {
            bool winning = true;
            for (StateId l2 : tables_.left_succ(l))
                if (tables_.spoiler_need(
                        l2, r2 - static_cast<StateId>(tables_.lc)) >= need)
                    winning = false;
            if (winning)
                return Move::spoiler(false,
                                     r2 - static_cast<StateId>(tables_.lc));
        }
        return first_edge();
    }

    Move verifier_move(const GamePosition& g, std::size_t remaining) const {
        const bool spoiler_left = g.pending->first;
        const std::size_t budget =
            remaining == detail::kNoWin ? detail::kNoWin : remaining - 1;
        auto surviving = [&](StateId l2, StateId r2) {
            return budget == detail::kNoWin ? tables_.wins_unbounded(l2, r2)
                                            : tables_.wins(l2, r2, budget);
        };
        if (spoiler_left) {
            const StateId l2 = g.pending->second;
            const auto& replies = tables_.right_succ(g.right);
            for (StateId r2 : replies) {
                const StateId rr = r2 - static_cast<StateId>(tables_.lc);
                if (surviving(l2, rr)) return Move::verifier(rr);
            }
            if (!replies.empty())
                return Move::verifier(replies.front() -
                                      static_cast<StateId>(tables_.lc));
        } else {
            const StateId r2 = g.pending->second;
            for (StateId l2 : tables_.left_succ(g.left))
                if (surviving(l2, r2)) return Move::verifier(l2);
            if (!tables_.left_succ(g.left).empty())
                return Move::verifier(tables_.left_succ(g.left).front());
        }
        throw IllegalMoveError("no move available");
    }

    detail::GameTables tables_;
    RoundBound bound_;
    Player player_;
};

inline Strategy extract_strategy(const PointedModel& p1, const PointedModel& p2,
                                 RoundBound rounds) {
    return Strategy(p1, p2, rounds);
}

}  // namespace modal
