// ============================================================================
// modal/kripke.hpp — finite Kripke models, pointed models, model classes
// ============================================================================
//
// A KripkeModel is an ordered list of named states, one accessibility
// relation, and a per-state valuation over a finite alphabet (stored as a
// 64-bit mask).  Models are immutable after construction; the constructor
// validates every invariant and precomputes sorted successor lists.
//
// Structural constructions:
//   disjoint_union      — tagged union of a class's members, states renamed
//                         "<member index>.<state name>", alphabets merged
//                         (absent propositions read as false)
//   unravel_to_depth    — depth-bounded tree unraveling from the point
//   generated_submodel  — restriction to states reachable from the point
//
// ============================================================================

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modal/errors.hpp"
#include "modal/formula.hpp"

namespace modal {

using StateId = std::int32_t;
using PropMask = std::uint64_t;

inline constexpr std::size_t kDefaultUnravelStateCap = 100'000;

class KripkeModel {
public:
    KripkeModel() = default;

    KripkeModel(Alphabet alphabet, std::vector<std::string> states,
                std::vector<std::pair<StateId, StateId>> rel,
                std::vector<PropMask> val)
        : alphabet_(std::move(alphabet)),
          states_(std::move(states)),
          rel_(std::move(rel)),
          val_(std::move(val)) {
        validate();
        std::sort(rel_.begin(), rel_.end());
        rel_.erase(std::unique(rel_.begin(), rel_.end()), rel_.end());
        succ_.assign(states_.size(), {});
        for (auto [a, b] : rel_) succ_[static_cast<std::size_t>(a)].push_back(b);
    }

    std::size_t num_states() const noexcept { return states_.size(); }
    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::string& state_name(StateId s) const {
        return states_[static_cast<std::size_t>(s)];
    }
    std::optional<StateId> state_index(std::string_view name) const {
        for (std::size_t i = 0; i < states_.size(); ++i)
            if (states_[i] == name) return static_cast<StateId>(i);
        return std::nullopt;
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    PropMask valuation(StateId s) const {
        return val_[static_cast<std::size_t>(s)];
    }
    const std::vector<PropMask>& valuations() const noexcept { return val_; }

    const std::vector<std::pair<StateId, StateId>>& relation() const noexcept {
        return rel_;
    }
    std::span<const StateId> successors(StateId s) const {
        return succ_[static_cast<std::size_t>(s)];
    }
    bool has_edge(StateId a, StateId b) const {
        for (StateId t : successors(a))
            if (t == b) return true;
        return false;
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < states_.size(); ++i)
            for (std::size_t j = i + 1; j < states_.size(); ++j)
                if (states_[i] == states_[j])
                    throw ValidationError("duplicate state '" + states_[i] + "'");
        const StateId n = static_cast<StateId>(states_.size());
        for (auto [a, b] : rel_)
            if (a < 0 || a >= n || b < 0 || b >= n)
                throw ValidationError("relation endpoint not a state");
        if (val_.size() != states_.size())
            throw ValidationError("valuation not defined for every state");
        const PropMask legal = a_mask();
        for (std::size_t i = 0; i < val_.size(); ++i)
            if (val_[i] & ~legal)
                throw ValidationError("valuation of state '" + states_[i] +
                                      "' outside the alphabet");
    }

    PropMask a_mask() const {
        return alphabet_.size() == kMaxPropositions
                   ? ~PropMask{0}
                   : (PropMask{1} << alphabet_.size()) - 1;
    }

    Alphabet alphabet_;
    std::vector<std::string> states_;
    std::vector<std::pair<StateId, StateId>> rel_;
    std::vector<PropMask> val_;
    std::vector<std::vector<StateId>> succ_;
};

class PointedModel {
public:
    PointedModel() = default;

    PointedModel(KripkeModel model, StateId point)
        : model_(std::move(model)), point_(point) {
        if (point_ < 0 ||
            static_cast<std::size_t>(point_) >= model_.num_states())
            throw ValidationError("designated point is not a state");
    }

    PointedModel(KripkeModel model, std::string_view point_name)
        : model_(std::move(model)) {
        auto idx = model_.state_index(point_name);
        if (!idx)
            throw ValidationError("designated point '" + std::string(point_name) +
                                  "' is not a state");
        point_ = *idx;
    }

    const KripkeModel& model() const noexcept { return model_; }
    StateId point() const noexcept { return point_; }
    const std::string& point_name() const { return model_.state_name(point_); }

private:
    KripkeModel model_;
    StateId point_ = 0;
};

// A finite sequence of pointed models; duplicates and bisimilar members are
// permitted.
struct ModelClass {
    std::vector<PointedModel> members;
    std::optional<std::string> label;

    std::size_t size() const noexcept { return members.size(); }
    bool empty() const noexcept { return members.empty(); }
    const PointedModel& operator[](std::size_t i) const { return members[i]; }
};

// ── Constructions ───────────────────────────────────────────────────────────

// Remaps a valuation mask from one alphabet's bit layout to another's.
inline PropMask remap_valuation(PropMask v, const Alphabet& from,
                                const Alphabet& to) {
    PropMask out = 0;
    for (std::size_t i = 0; i < from.size(); ++i)
        if (v & (PropMask{1} << i)) out |= PropMask{1} << *to.index_of(from.name(i));
    return out;
}

namespace detail {

struct UnionLayout {
    Alphabet alphabet;
    std::vector<std::size_t> offsets;  // state-index offset per member
};

inline UnionLayout union_layout(const ModelClass& c) {
    UnionLayout lay;
    std::size_t off = 0;
    for (const PointedModel& m : c.members) {
        lay.alphabet = Alphabet::merged(lay.alphabet, m.model().alphabet());
        lay.offsets.push_back(off);
        off += m.model().num_states();
    }
    return lay;
}

}  // namespace detail

// Tagged union of all members; no cross-member edges.  States keep their
// member's internal order, renamed "<member index>.<name>".
inline KripkeModel disjoint_union(const ModelClass& c) {
    detail::UnionLayout lay = detail::union_layout(c);
    std::vector<std::string> states;
    std::vector<std::pair<StateId, StateId>> rel;
    std::vector<PropMask> val;
    for (std::size_t k = 0; k < c.members.size(); ++k) {
        const KripkeModel& m = c.members[k].model();
        const StateId off = static_cast<StateId>(lay.offsets[k]);
        for (std::size_t s = 0; s < m.num_states(); ++s) {
            states.push_back(std::to_string(k) + "." +
                             m.state_name(static_cast<StateId>(s)));
            val.push_back(remap_valuation(m.valuation(static_cast<StateId>(s)),
                                          m.alphabet(), lay.alphabet));
        }
        for (auto [a, b] : m.relation())
            rel.emplace_back(off + a, off + b);
    }
    return KripkeModel(lay.alphabet, std::move(states), std::move(rel),
                       std::move(val));
}

// disjoint_union plus the state-index offset of each member, so callers can
// locate the tagged copy of a member's point.
inline std::pair<KripkeModel, std::vector<std::size_t>> disjoint_union_indexed(
    const ModelClass& c) {
    detail::UnionLayout lay = detail::union_layout(c);
    return {disjoint_union(c), std::move(lay.offsets)};
}

namespace detail {

// Union of two classes' members with the tagged point of every member, the
// shared substrate for all class-level computations.
struct CombinedClasses {
    KripkeModel model;
    std::vector<StateId> points_c1;
    std::vector<StateId> points_c2;
};

inline CombinedClasses combine(const ModelClass& c1, const ModelClass& c2) {
    ModelClass both;
    both.members.reserve(c1.size() + c2.size());
    for (const PointedModel& m : c1.members) both.members.push_back(m);
    for (const PointedModel& m : c2.members) both.members.push_back(m);
    auto [model, offsets] = disjoint_union_indexed(both);
    CombinedClasses out{std::move(model), {}, {}};
    for (std::size_t i = 0; i < c1.size(); ++i)
        out.points_c1.push_back(static_cast<StateId>(offsets[i]) +
                                c1.members[i].point());
    for (std::size_t j = 0; j < c2.size(); ++j)
        out.points_c2.push_back(static_cast<StateId>(offsets[c1.size() + j]) +
                                c2.members[j].point());
    return out;
}

// Union of two models without the renaming work of disjoint_union: states
// 0..|left|-1 are the left model's, the rest the right's, valuations
// remapped to the merged alphabet.
struct PairView {
    Alphabet alphabet;
    std::vector<std::vector<StateId>> succ;
    std::vector<PropMask> val;
    std::size_t left_count = 0;
    StateId left_point = 0, right_point = 0;
};

inline PairView make_pair_view(const PointedModel& p1, const PointedModel& p2) {
    const KripkeModel& a = p1.model();
    const KripkeModel& b = p2.model();
    PairView v;
    v.alphabet = Alphabet::merged(a.alphabet(), b.alphabet());
    v.left_count = a.num_states();
    v.left_point = p1.point();
    v.right_point = static_cast<StateId>(a.num_states()) + p2.point();
    v.succ.resize(a.num_states() + b.num_states());
    v.val.resize(a.num_states() + b.num_states());
    for (std::size_t s = 0; s < a.num_states(); ++s) {
        const StateId id = static_cast<StateId>(s);
        v.succ[s].assign(a.successors(id).begin(), a.successors(id).end());
        v.val[s] = remap_valuation(a.valuation(id), a.alphabet(), v.alphabet);
    }
    const StateId off = static_cast<StateId>(a.num_states());
    for (std::size_t s = 0; s < b.num_states(); ++s) {
        const StateId id = static_cast<StateId>(s);
        for (StateId t : b.successors(id))
            v.succ[static_cast<std::size_t>(off) + s].push_back(off + t);
        v.val[static_cast<std::size_t>(off) + s] =
            remap_valuation(b.valuation(id), b.alphabet(), v.alphabet);
    }
    return v;
}

}  // namespace detail

// Depth-bounded tree unraveling: states are the paths of length <= depth
// from the point, named "u<i>" in breadth-first discovery order.
inline PointedModel unravel_to_depth(const PointedModel& p, std::size_t depth,
                                     std::size_t state_cap = kDefaultUnravelStateCap) {
    const KripkeModel& m = p.model();
    struct NodeInfo {
        StateId origin;
        std::size_t level;
    };
    std::vector<NodeInfo> nodes{{p.point(), 0}};
    std::vector<std::pair<StateId, StateId>> rel;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].level == depth) continue;
        for (StateId t : m.successors(nodes[i].origin)) {
            if (nodes.size() >= state_cap)
                throw ResourceError("unraveling exceeds state cap of " +
                                    std::to_string(state_cap));
            rel.emplace_back(static_cast<StateId>(i),
                             static_cast<StateId>(nodes.size()));
            nodes.push_back({t, nodes[i].level + 1});
        }
    }
    std::vector<std::string> states;
    std::vector<PropMask> val;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        states.push_back("u" + std::to_string(i));
        val.push_back(m.valuation(nodes[i].origin));
    }
    return PointedModel(KripkeModel(m.alphabet(), std::move(states),
                                    std::move(rel), std::move(val)),
                        StateId{0});
}

// Restriction to the states reachable from the point (the submodel generated
// by the designated point).  State names and relative order are preserved.
inline PointedModel generated_submodel(const PointedModel& p) {
    const KripkeModel& m = p.model();
    std::vector<bool> reach(m.num_states(), false);
    std::vector<StateId> stack{p.point()};
    reach[static_cast<std::size_t>(p.point())] = true;
    while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        for (StateId t : m.successors(s))
            if (!reach[static_cast<std::size_t>(t)]) {
                reach[static_cast<std::size_t>(t)] = true;
                stack.push_back(t);
            }
    }
    std::vector<StateId> remap(m.num_states(), -1);
    std::vector<std::string> states;
    std::vector<PropMask> val;
    for (std::size_t s = 0; s < m.num_states(); ++s) {
        if (!reach[s]) continue;
        remap[s] = static_cast<StateId>(states.size());
        states.push_back(m.state_name(static_cast<StateId>(s)));
        val.push_back(m.valuation(static_cast<StateId>(s)));
    }
    std::vector<std::pair<StateId, StateId>> rel;
    for (auto [a, b] : m.relation())
        if (reach[static_cast<std::size_t>(a)] &&
            reach[static_cast<std::size_t>(b)])
            rel.emplace_back(remap[static_cast<std::size_t>(a)],
                             remap[static_cast<std::size_t>(b)]);
    return PointedModel(KripkeModel(m.alphabet(), std::move(states),
                                    std::move(rel), std::move(val)),
                        remap[static_cast<std::size_t>(p.point())]);
}

}  // namespace modal
