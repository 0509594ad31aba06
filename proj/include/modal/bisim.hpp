// ============================================================================
// modal/bisim.hpp — bisimulation via partition refinement
// ============================================================================
//
// The coarsest bisimulation of a model is computed by synchronous iterated
// splitting: round 0 groups states by valuation, round k+1 splits by the set
// of round-k blocks reachable in one step.  Round k of the sequence is
// exactly the k-bisimilarity approximant, and the fixpoint is bisimilarity,
// so one refinement run answers coarsest_bisim, k_bisimilar and bisimilar.
//
// distinguishing_formula turns the first round at which two points separate
// into a witness formula: a valuation mismatch yields a literal, and a
// level-(k+1) split yields <>(/\ ...) over the matching level-k witnesses of
// the winning transition, negated when the transition lies on the right.
// The result has modal depth equal to the least k at which k-bisimilarity
// fails, which is the minimal separating depth.
//
// ============================================================================

#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modal/formula.hpp"
#include "modal/kripke.hpp"
#include "modal/semantics.hpp"

namespace modal {

// Disjoint nonempty blocks covering a model's states.  Block ids are
// assigned by first occurrence in state order.
class Partition {
public:
    Partition() = default;
    Partition(std::vector<int> block_of, std::size_t count)
        : block_of_(std::move(block_of)), count_(count) {}

    std::size_t num_blocks() const noexcept { return count_; }
    std::size_t num_states() const noexcept { return block_of_.size(); }
    int block_of(StateId s) const { return block_of_[static_cast<std::size_t>(s)]; }
    bool same_block(StateId a, StateId b) const {
        return block_of(a) == block_of(b);
    }

    std::vector<std::vector<StateId>> blocks() const {
        std::vector<std::vector<StateId>> out(count_);
        for (std::size_t s = 0; s < block_of_.size(); ++s)
            out[static_cast<std::size_t>(block_of_[s])].push_back(
                static_cast<StateId>(s));
        return out;
    }

    bool operator==(const Partition& o) const {
        return block_of_ == o.block_of_;
    }

    // True if every block of this partition lies inside a block of `coarser`.
    bool refines(const Partition& c) const {
        std::vector<int> image(count_, -1);
        for (std::size_t s = 0; s < block_of_.size(); ++s) {
            int& img = image[static_cast<std::size_t>(block_of_[s])];
            if (img == -1) img = c.block_of_[s];
            else if (img != c.block_of_[s]) return false;
        }
        return true;
    }

private:
    std::vector<int> block_of_;
    std::size_t count_ = 0;
};

namespace detail {

inline Partition valuation_partition(const std::vector<PropMask>& val) {
    std::vector<int> block_of(val.size());
    std::map<PropMask, int> ids;
    for (std::size_t s = 0; s < val.size(); ++s) {
        auto [it, _] = ids.try_emplace(val[s], static_cast<int>(ids.size()));
        block_of[s] = it->second;
    }
    return Partition(std::move(block_of), ids.size());
}

inline Partition refine_once(const std::vector<std::vector<StateId>>& succ,
                             const Partition& p) {
    std::vector<int> block_of(succ.size());
    std::map<std::pair<int, std::vector<int>>, int> ids;
    for (std::size_t s = 0; s < succ.size(); ++s) {
        std::vector<int> sig;
        sig.reserve(succ[s].size());
        for (StateId t : succ[s]) sig.push_back(p.block_of(t));
        std::sort(sig.begin(), sig.end());
        sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
        auto [it, _] = ids.try_emplace(
            {p.block_of(static_cast<StateId>(s)), std::move(sig)},
            static_cast<int>(ids.size()));
        block_of[s] = it->second;
    }
    return Partition(std::move(block_of), ids.size());
}

// Rounds 0..stabilization (or 0..max_rounds if that comes first).  The
// round-k partition is the k-bisimilarity approximant.
inline std::vector<Partition> refinement_levels(
    const std::vector<std::vector<StateId>>& succ,
    const std::vector<PropMask>& val,
    std::optional<std::size_t> max_rounds = std::nullopt) {
    std::vector<Partition> levels{valuation_partition(val)};
    while (!max_rounds || levels.size() <= *max_rounds) {
        Partition next = refine_once(succ, levels.back());
        if (next.num_blocks() == levels.back().num_blocks()) break;
        levels.push_back(std::move(next));
    }
    return levels;
}

}  // namespace detail

// ── Partition-level operations ──────────────────────────────────────────────

// Coarsest partition whose induced relation is a bisimulation on `m`.
inline Partition coarsest_bisim(const KripkeModel& m) {
    std::vector<std::vector<StateId>> succ(m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        auto sp = m.successors(static_cast<StateId>(s));
        succ[s].assign(sp.begin(), sp.end());
    }
    return detail::refinement_levels(succ, m.valuations()).back();
}

// The k-bisimilarity approximant partition of `m`.
inline Partition bounded_bisim(const KripkeModel& m, std::size_t k) {
    std::vector<std::vector<StateId>> succ(m.num_states());
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        auto sp = m.successors(static_cast<StateId>(s));
        succ[s].assign(sp.begin(), sp.end());
    }
    auto levels = detail::refinement_levels(succ, m.valuations(), k);
    return levels[std::min(k, levels.size() - 1)];
}

// ── Pointed-model relations ─────────────────────────────────────────────────

inline bool bisimilar(const PointedModel& p1, const PointedModel& p2) {
    detail::PairView v = detail::make_pair_view(p1, p2);
    Partition p = detail::refinement_levels(v.succ, v.val).back();
    return p.same_block(v.left_point, v.right_point);
}

inline bool k_bisimilar(const PointedModel& p1, const PointedModel& p2,
                        std::size_t k) {
    detail::PairView v = detail::make_pair_view(p1, p2);
    auto levels = detail::refinement_levels(v.succ, v.val, k);
    return levels[std::min(k, levels.size() - 1)].same_block(v.left_point,
                                                             v.right_point);
}

// ── Distinguishing-formula synthesis ────────────────────────────────────────

struct DistinguishResult {
    // Present iff the models are not bisimilar; true on the first argument.
    std::optional<Formula> formula;
    // Least k such that the arguments are not k-bisimilar.
    std::size_t depth = 0;
    // Bisimilar case: the bisimulation restricted to pairs reachable from
    // the two points, as (left state, right state) names.
    std::vector<std::pair<std::string, std::string>> witness;

    bool is_bisimilar() const { return !formula.has_value(); }
};

namespace detail {

inline constexpr std::size_t kInfiniteLevel =
    std::numeric_limits<std::size_t>::max();

// Synthesis state shared by the recursion: the union view, its refinement
// levels, and the per-pair separation level.
class DistSynth {
public:
    DistSynth(const PairView& v, const std::vector<Partition>& levels)
        : v_(v), levels_(levels) {}

    // Least k with "not k-bisimilar", or kInfiniteLevel.
    std::size_t kappa(StateId a, StateId b) const {
        for (std::size_t k = 0; k < levels_.size(); ++k)
            if (!levels_[k].same_block(a, b)) return k;
        return kInfiniteLevel;
    }

    // Formula true at `a`, false at `b`, of modal depth exactly kappa(a,b).
    Formula dist(StateId a, StateId b) {
        auto it = memo_.find({a, b});
        if (it != memo_.end()) return it->second;
        const std::size_t k = kappa(a, b);
        std::vector<Formula> candidates;
        if (k == 0) {
            const PropMask va = v_.val[static_cast<std::size_t>(a)];
            const PropMask vb = v_.val[static_cast<std::size_t>(b)];
            for (std::size_t i = 0; i < v_.alphabet.size(); ++i) {
                const PropMask bit = PropMask{1} << i;
                if ((va & bit) && !(vb & bit))
                    candidates.push_back(Formula::atom(v_.alphabet.name(i)));
                if (!(va & bit) && (vb & bit))
                    candidates.push_back(
                        Formula::negate(Formula::atom(v_.alphabet.name(i))));
            }
        } else {
            for (StateId a2 : v_.succ[static_cast<std::size_t>(a)]) {
                if (!winning_move(a2, b, k - 1)) continue;
                std::vector<Formula> parts;
                for (StateId b2 : v_.succ[static_cast<std::size_t>(b)])
                    parts.push_back(dist(a2, b2));
                candidates.push_back(Formula::dia(canonical_conj(std::move(parts))));
            }
            for (StateId b2 : v_.succ[static_cast<std::size_t>(b)]) {
                if (!winning_move(b2, a, k - 1)) continue;
                std::vector<Formula> parts;
                for (StateId a2 : v_.succ[static_cast<std::size_t>(a)])
                    parts.push_back(dist(b2, a2));
                candidates.push_back(Formula::negate(
                    Formula::dia(canonical_conj(std::move(parts)))));
            }
        }
        if (candidates.empty())
            throw Error("internal: no distinguishing candidate at level " +
                        std::to_string(k));
        Formula best = pick_least(candidates);
        memo_.emplace(std::pair<StateId, StateId>{a, b}, best);
        return best;
    }

private:
    // A transition to `to` wins at level budget+1 when every opposing
    // successor is separated within `budget` rounds; this keeps the
    // recursion's depth at the minimal level.
    bool winning_move(StateId to, StateId opponent, std::size_t budget) const {
        for (StateId r : v_.succ[static_cast<std::size_t>(opponent)])
            if (kappa(to, r) > budget) return false;
        return true;
    }

    static Formula pick_least(const std::vector<Formula>& candidates) {
        const Formula* best = nullptr;
        std::string best_printed;
        for (const Formula& f : candidates) {
            std::string printed = print_formula(f);
            if (!best || f.size() < best->size() ||
                (f.size() == best->size() && printed < best_printed)) {
                best = &f;
                best_printed = std::move(printed);
            }
        }
        return *best;
    }

    const PairView& v_;
    const std::vector<Partition>& levels_;
    std::map<std::pair<StateId, StateId>, Formula> memo_;
};

}  // namespace detail

// Minimal-depth separating formula for two pointed models, or the reachable
// part of a bisimulation linking them.  Deterministic: among minimal-depth
// candidates the least under (node count, printed form) is chosen.
inline DistinguishResult distinguishing_formula(const PointedModel& p1,
                                                const PointedModel& p2) {
    detail::PairView v = detail::make_pair_view(p1, p2);
    auto levels = detail::refinement_levels(v.succ, v.val);
    DistinguishResult r;
    const Partition& stable = levels.back();
    if (stable.same_block(v.left_point, v.right_point)) {
        // Product reachability over same-block pairs.
        std::vector<std::pair<StateId, StateId>> frontier{
            {v.left_point, v.right_point}};
        std::set<std::pair<StateId, StateId>> seen{frontier.front()};
        while (!frontier.empty()) {
            auto [a, b] = frontier.back();
            frontier.pop_back();
            for (StateId a2 : v.succ[static_cast<std::size_t>(a)])
                for (StateId b2 : v.succ[static_cast<std::size_t>(b)])
                    if (stable.same_block(a2, b2) &&
                        seen.insert({a2, b2}).second)
                        frontier.push_back({a2, b2});
        }
        const StateId off = static_cast<StateId>(v.left_count);
        for (auto [a, b] : seen)
            r.witness.emplace_back(p1.model().state_name(a),
                                   p2.model().state_name(b - off));
        return r;
    }
    detail::DistSynth synth(v, levels);
    r.depth = synth.kappa(v.left_point, v.right_point);
    r.formula = synth.dist(v.left_point, v.right_point);
    return r;
}

// ── Characteristic formulas ─────────────────────────────────────────────────

inline constexpr std::size_t kDefaultFormulaSizeCap = 1'000'000;

namespace detail {

inline Formula characteristic_at(const KripkeModel& m, StateId s,
                                 std::size_t level, std::size_t cap,
                                 std::map<std::pair<StateId, std::size_t>,
                                          Formula>& memo) {
    auto it = memo.find({s, level});
    if (it != memo.end()) return it->second;
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < m.alphabet().size(); ++i) {
        Formula atom = Formula::atom(m.alphabet().name(i));
        parts.push_back((m.valuation(s) & (PropMask{1} << i))
                            ? atom
                            : Formula::negate(atom));
    }
    if (level > 0) {
        std::vector<Formula> next;
        for (StateId t : m.successors(s))
            next.push_back(characteristic_at(m, t, level - 1, cap, memo));
        for (const Formula& f : next) parts.push_back(Formula::dia(f));
        parts.push_back(Formula::box(canonical_disj(std::move(next))));
    }
    Formula out = canonical_conj(std::move(parts));
    if (out.size() > cap)
        throw ResourceError("characteristic formula exceeds size cap of " +
                            std::to_string(cap));
    memo.emplace(std::pair<StateId, std::size_t>{s, level}, out);
    return out;
}

}  // namespace detail

// Depth-d formula satisfied by exactly the pointed models (over the same
// alphabet) that are d-bisimilar to `p`.
inline Formula characteristic_formula(const PointedModel& p, std::size_t depth,
                                      std::size_t cap = kDefaultFormulaSizeCap) {
    std::map<std::pair<StateId, std::size_t>, Formula> memo;
    return detail::characteristic_at(p.model(), p.point(), depth, cap, memo);
}

}  // namespace modal
