// ============================================================================
// modal/classes.hpp — lifted relations, class separation, definability
// ============================================================================
//
// Lifts bisimilarity from pointed models to classes of pointed models:
//
//   lift_exists(C1, C2)  — some cross pair is bisimilar
//   lift_forall(C1, C2)  — every member of each class has a bisimilar
//                          partner in the other
//
// For finite classes these lifts decide separability and class equivalence
// exactly:
//
//   class_separation — if some cross pair is bisimilar, that pair witnesses
//     inseparability; otherwise the pairwise minimal distinguishing formulas
//     psi(i,j) (true on C1's member, false on C2's) assemble into the
//     separator \/_i /\_j psi(i,j), reported in forward polarity with depth
//     equal to the minimal separating depth.
//
//   class_equiv — lift_forall, with a witnessing formula (valid on one
//     class, false at some member of the other) when it fails.
//
//   definable — a subset of a finite universe is definable iff it separates
//     from its complement; undefinable subsets come with a bisimilar cross
//     pair straddling the cut.
//
//   compare_fragments — compares depth-d1 and depth-d2 fragments over a
//     universe twice: by the fineness of the induced member partitions
//     (distinguishing power) and by inclusion of the families of definable
//     member subsets (expressive power).  On a finite universe the two
//     verdicts provably coincide; the comparison computes both and insists.
//
// ============================================================================

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modal/bisim.hpp"
#include "modal/formula.hpp"
#include "modal/kripke.hpp"
#include "modal/semantics.hpp"

namespace modal {

// Base relation for the lifts: bisimilarity, or k-bisimilarity when a depth
// is supplied (the fragment hook).
inline bool lift_exists(const ModelClass& c1, const ModelClass& c2,
                        std::optional<std::size_t> depth = std::nullopt) {
    detail::CombinedClasses cc = detail::combine(c1, c2);
    Partition p = depth ? bounded_bisim(cc.model, *depth)
                        : coarsest_bisim(cc.model);
    for (StateId a : cc.points_c1)
        for (StateId b : cc.points_c2)
            if (p.same_block(a, b)) return true;
    return false;
}

inline bool lift_forall(const ModelClass& c1, const ModelClass& c2,
                        std::optional<std::size_t> depth = std::nullopt) {
    detail::CombinedClasses cc = detail::combine(c1, c2);
    Partition p = depth ? bounded_bisim(cc.model, *depth)
                        : coarsest_bisim(cc.model);
    auto matched = [&](StateId x, const std::vector<StateId>& others) {
        for (StateId y : others)
            if (p.same_block(x, y)) return true;
        return false;
    };
    for (StateId a : cc.points_c1)
        if (!matched(a, cc.points_c2)) return false;
    for (StateId b : cc.points_c2)
        if (!matched(b, cc.points_c1)) return false;
    return true;
}

// ── Class separation ────────────────────────────────────────────────────────

struct SeparationResult {
    // Present iff the classes are separable; true on c1, false on c2.
    std::optional<Formula> separator;
    // Modal depth of the separator (the minimal separating depth).
    std::size_t depth = 0;
    // Inseparable case: indices (into c1, into c2) of a bisimilar pair.
    std::optional<std::pair<std::size_t, std::size_t>> witness;

    bool separable() const { return separator.has_value(); }
};

inline SeparationResult class_separation(const ModelClass& c1,
                                         const ModelClass& c2) {
    SeparationResult r;
    if (c1.empty()) {
        r.separator = Formula::bot();
        return r;
    }
    if (c2.empty()) {
        r.separator = Formula::top();
        return r;
    }
    detail::CombinedClasses cc = detail::combine(c1, c2);
    Partition p = coarsest_bisim(cc.model);
    for (std::size_t i = 0; i < c1.size(); ++i)
        for (std::size_t j = 0; j < c2.size(); ++j)
            if (p.same_block(cc.points_c1[i], cc.points_c2[j])) {
                r.witness = {i, j};
                return r;
            }

    // No bisimilar cross pair: assemble \/_i /\_j psi(i,j) from the pairwise
    // syntheses, memoized per pair of bisimulation blocks.
    std::map<std::pair<int, int>, Formula> by_block;
    std::vector<Formula> disjuncts;
    for (std::size_t i = 0; i < c1.size(); ++i) {
        std::vector<Formula> conjuncts;
        for (std::size_t j = 0; j < c2.size(); ++j) {
            const std::pair<int, int> key{p.block_of(cc.points_c1[i]),
                                          p.block_of(cc.points_c2[j])};
            auto it = by_block.find(key);
            if (it == by_block.end()) {
                DistinguishResult d =
                    distinguishing_formula(c1.members[i], c2.members[j]);
                it = by_block.emplace(key, *d.formula).first;
            }
            conjuncts.push_back(it->second);
        }
        disjuncts.push_back(canonical_conj(std::move(conjuncts)));
    }
    r.separator = canonical_disj(std::move(disjuncts));
    r.depth = r.separator->depth();
    if (sep_check(c1, c2, *r.separator) != SepPolarity::Forward)
        throw Error("internal: assembled separator failed verification");
    return r;
}

// C1 and C2 cannot be told apart by any single formula.
inline bool asymp(const ModelClass& c1, const ModelClass& c2) {
    return !class_separation(c1, c2).separable();
}

// ── Class equivalence ───────────────────────────────────────────────────────

struct ClassEquivalence {
    bool equivalent = false;
    // When not equivalent: valid on class `valid_on` (1 or 2) and false at
    // member `unmatched` of the other class.
    std::optional<Formula> witness;
    int valid_on = 0;
    std::size_t unmatched = 0;
};

inline ClassEquivalence class_equiv(const ModelClass& c1, const ModelClass& c2) {
    detail::CombinedClasses cc = detail::combine(c1, c2);
    Partition p = coarsest_bisim(cc.model);
    auto match = [&](StateId x, const std::vector<StateId>& others) {
        for (StateId y : others)
            if (p.same_block(x, y)) return true;
        return false;
    };
    ClassEquivalence r;
    for (std::size_t j = 0; j < c2.size(); ++j) {
        if (match(cc.points_c2[j], cc.points_c1)) continue;
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < c1.size(); ++i)
            parts.push_back(
                *distinguishing_formula(c1.members[i], c2.members[j]).formula);
        r.witness = canonical_disj(std::move(parts));
        r.valid_on = 1;
        r.unmatched = j;
        return r;
    }
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (match(cc.points_c1[i], cc.points_c2)) continue;
        std::vector<Formula> parts;
        for (std::size_t j = 0; j < c2.size(); ++j)
            parts.push_back(
                *distinguishing_formula(c2.members[j], c1.members[i]).formula);
        r.witness = canonical_disj(std::move(parts));
        r.valid_on = 2;
        r.unmatched = i;
        return r;
    }
    r.equivalent = true;
    return r;
}

// ── Definability over a finite universe ─────────────────────────────────────

struct Definability {
    // Present iff the subset is definable; true exactly on the subset.
    std::optional<Formula> formula;
    // Undefinable case: universe indices of a bisimilar pair straddling the
    // cut (first inside the subset, second outside).
    std::optional<std::pair<std::size_t, std::size_t>> witness;

    bool definable() const { return formula.has_value(); }
};

inline Definability definable(const ModelClass& universe,
                              const std::vector<std::size_t>& subset) {
    std::vector<char> in(universe.size(), 0);
    for (std::size_t idx : subset) {
        if (idx >= universe.size())
            throw std::invalid_argument("definable: subset index out of range");
        in[idx] = 1;
    }
    ModelClass inside, outside;
    std::vector<std::size_t> in_idx, out_idx;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (in[i]) {
            inside.members.push_back(universe.members[i]);
            in_idx.push_back(i);
        } else {
            outside.members.push_back(universe.members[i]);
            out_idx.push_back(i);
        }
    }
    SeparationResult s = class_separation(inside, outside);
    Definability r;
    if (s.separable()) {
        r.formula = s.separator;
    } else {
        r.witness = {in_idx[s.witness->first], out_idx[s.witness->second]};
    }
    return r;
}

// ── Fragment comparison ─────────────────────────────────────────────────────

enum class Order { Equal, FirstStrictlyLess, SecondStrictlyLess, Incomparable };

inline const char* order_name(Order o) {
    switch (o) {
        case Order::Equal: return "equal";
        case Order::FirstStrictlyLess: return "first-strictly-less";
        case Order::SecondStrictlyLess: return "second-strictly-less";
        case Order::Incomparable: return "incomparable";
    }
    return "?";
}

struct FragmentComparison {
    Order distinguishing;
    Order expressive;
};

namespace detail {

// Verdict from two partitions of the same index set, encoded as block-id
// vectors: finer means more powerful.
inline Order partition_order(const std::vector<int>& p1,
                             const std::vector<int>& p2) {
    auto refines = [](const std::vector<int>& fine,
                      const std::vector<int>& coarse) {
        std::map<int, int> image;
        for (std::size_t i = 0; i < fine.size(); ++i) {
            auto [it, fresh] = image.try_emplace(fine[i], coarse[i]);
            if (!fresh && it->second != coarse[i]) return false;
        }
        return true;
    };
    const bool r21 = refines(p2, p1);  // p2 finer: second at least as strong
    const bool r12 = refines(p1, p2);
    if (r21 && r12) return Order::Equal;
    if (r21) return Order::FirstStrictlyLess;
    if (r12) return Order::SecondStrictlyLess;
    return Order::Incomparable;
}

// Member partition induced by depth-d equivalence, via bisim refinement.
inline std::vector<int> member_partition_refinement(
    const CombinedClasses& cc, const std::vector<Partition>& levels,
    std::size_t d) {
    const Partition& p = levels[std::min(d, levels.size() - 1)];
    std::vector<int> out;
    std::map<int, int> renumber;
    for (StateId s : cc.points_c1) {
        auto [it, _] = renumber.try_emplace(p.block_of(s),
                                            static_cast<int>(renumber.size()));
        out.push_back(it->second);
    }
    return out;
}

// Member partition induced by the depth-d definable-set algebra: atoms of
// the algebra generated by the proposition sets and <>-images of the
// previous level's atoms.  Independent route from the refinement above.
inline std::vector<std::vector<int>> member_partition_algebra(
    const CombinedClasses& cc, std::size_t max_level) {
    const KripkeModel& m = cc.model;
    const std::size_t n = m.num_states();
    std::vector<int> atom_of(n);
    {
        std::map<PropMask, int> ids;
        for (std::size_t s = 0; s < n; ++s) {
            auto [it, _] = ids.try_emplace(m.valuation(static_cast<StateId>(s)),
                                           static_cast<int>(ids.size()));
            atom_of[s] = it->second;
        }
    }
    auto project = [&](const std::vector<int>& atoms) {
        std::vector<int> out;
        std::map<int, int> renumber;
        for (StateId s : cc.points_c1) {
            auto [it, _] =
                renumber.try_emplace(atoms[static_cast<std::size_t>(s)],
                                     static_cast<int>(renumber.size()));
            out.push_back(it->second);
        }
        return out;
    };
    std::vector<std::vector<int>> per_level{project(atom_of)};
    for (std::size_t d = 1; d <= max_level; ++d) {
        std::map<std::pair<PropMask, std::vector<int>>, int> ids;
        std::vector<int> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<int> seen;
            for (StateId t : m.successors(static_cast<StateId>(s)))
                seen.push_back(atom_of[static_cast<std::size_t>(t)]);
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            auto [it, _] = ids.try_emplace(
                {m.valuation(static_cast<StateId>(s)), std::move(seen)},
                static_cast<int>(ids.size()));
            next[s] = it->second;
        }
        atom_of = std::move(next);
        per_level.push_back(project(atom_of));
    }
    return per_level;
}

// The definable member subsets at one depth are exactly the unions of that
// depth's atom blocks, so one family includes the other iff each block of
// the first is a union of blocks of the second.
inline bool family_included(const std::vector<int>& p1,
                            const std::vector<int>& p2) {
    std::map<int, int> image;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        auto [it, fresh] = image.try_emplace(p2[i], p1[i]);
        if (!fresh && it->second != p1[i]) return false;
    }
    return true;
}

inline Order family_order(const std::vector<int>& p1,
                          const std::vector<int>& p2) {
    const bool i12 = family_included(p1, p2);
    const bool i21 = family_included(p2, p1);
    if (i12 && i21) return Order::Equal;
    if (i12) return Order::FirstStrictlyLess;
    if (i21) return Order::SecondStrictlyLess;
    return Order::Incomparable;
}

}  // namespace detail

// Compare the depth-d1 and depth-d2 fragments over a finite universe, in
// distinguishing power and (independently computed) expressive power.
inline FragmentComparison compare_fragments(const ModelClass& universe,
                                            std::size_t d1, std::size_t d2) {
    detail::CombinedClasses cc = detail::combine(universe, ModelClass{});

    std::vector<std::vector<StateId>> succ(cc.model.num_states());
    for (std::size_t s = 0; s < cc.model.num_states(); ++s) {
        auto sp = cc.model.successors(static_cast<StateId>(s));
        succ[s].assign(sp.begin(), sp.end());
    }
    auto levels = detail::refinement_levels(succ, cc.model.valuations(),
                                            std::max(d1, d2));
    std::vector<int> mp1 = detail::member_partition_refinement(cc, levels, d1);
    std::vector<int> mp2 = detail::member_partition_refinement(cc, levels, d2);
    const Order dist = detail::partition_order(mp1, mp2);

    auto algebra = detail::member_partition_algebra(cc, std::max(d1, d2));
    const Order expr =
        detail::family_order(algebra[std::min(d1, algebra.size() - 1)],
                             algebra[std::min(d2, algebra.size() - 1)]);

    if (dist != expr)
        throw Error(
            "internal: distinguishing and expressive fragment orders disagree");
    return FragmentComparison{dist, expr};
}

}  // namespace modal
