// ============================================================================
// modal/oracle.hpp — brute-force separability search
// ============================================================================
//
// Deliberately independent of the bisim and classes modules: everything here
// is built from syntax and plain Kripke semantics, so it can serve as a
// second opinion on their results.
//
// Two modes:
//
//   * max_size given — scan the canonical enumeration over the merged
//     alphabet in (depth, size, printed) order and return the first formula
//     that separates the classes.  The first hit therefore has minimal
//     depth among the enumerated candidates.
//
//   * max_size omitted — exhaustive over all formula sizes: level d of the
//     definable-set family over the combined model is the Boolean algebra
//     generated by the proposition sets plus the <>-images of level d-1
//     atoms.  A depth-d separator exists iff no level-d atom meets both
//     classes' points; the returned formula is assembled from the atoms'
//     defining formulas.  If the atoms stabilize before max_depth, no
//     separator of any depth exists at all.
//
// ============================================================================

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modal/enumerate.hpp"
#include "modal/formula.hpp"
#include "modal/kripke.hpp"
#include "modal/semantics.hpp"

namespace modal {

struct OracleResult {
    Formula formula;
    std::size_t depth = 0;
};

namespace detail {

inline std::optional<OracleResult> oracle_scan(const ModelClass& c1,
                                               const ModelClass& c2,
                                               std::span<const Formula> pool) {
    CombinedClasses cc = combine(c1, c2);
    DenotationCache cache(cc.model);
    for (const Formula& f : pool) {
        const std::vector<char>& den = cache.get(f);
        bool fwd = true, rev = true;
        for (StateId s : cc.points_c1) {
            fwd &= den[static_cast<std::size_t>(s)] != 0;
            rev &= den[static_cast<std::size_t>(s)] == 0;
        }
        for (StateId s : cc.points_c2) {
            fwd &= den[static_cast<std::size_t>(s)] == 0;
            rev &= den[static_cast<std::size_t>(s)] != 0;
        }
        if (fwd || rev) return OracleResult{f, f.depth()};
    }
    return std::nullopt;
}

// Depth-bounded exhaustive search via the definable-set algebra.  Atoms are
// tracked as a partition of the combined model's states together with a
// defining formula per atom.
inline std::optional<OracleResult> oracle_closure(const ModelClass& c1,
                                                  const ModelClass& c2,
                                                  std::size_t max_depth) {
    CombinedClasses cc = combine(c1, c2);
    const KripkeModel& m = cc.model;
    const std::size_t n = m.num_states();
    const Alphabet& alphabet = m.alphabet();

    // Level-0 atoms: one per realized valuation, defined by its literals.
    std::vector<int> atom_of(n);
    std::vector<Formula> atom_formula;
    {
        std::map<PropMask, int> ids;
        for (std::size_t s = 0; s < n; ++s) {
            const PropMask v = m.valuation(static_cast<StateId>(s));
            auto [it, fresh] = ids.try_emplace(v, static_cast<int>(ids.size()));
            atom_of[s] = it->second;
            if (fresh) {
                std::vector<Formula> lits;
                for (std::size_t i = 0; i < alphabet.size(); ++i) {
                    Formula atom = Formula::atom(alphabet.name(i));
                    lits.push_back((v & (PropMask{1} << i))
                                       ? atom
                                       : Formula::negate(atom));
                }
                atom_formula.push_back(canonical_conj(std::move(lits)));
            }
        }
    }

    auto separator_here = [&](std::size_t depth) -> std::optional<OracleResult> {
        std::vector<char> meets_c1(atom_formula.size(), 0);
        std::vector<char> meets_c2(atom_formula.size(), 0);
        for (StateId s : cc.points_c1)
            meets_c1[static_cast<std::size_t>(atom_of[static_cast<std::size_t>(s)])] = 1;
        for (StateId s : cc.points_c2)
            meets_c2[static_cast<std::size_t>(atom_of[static_cast<std::size_t>(s)])] = 1;
        for (std::size_t a = 0; a < atom_formula.size(); ++a)
            if (meets_c1[a] && meets_c2[a]) return std::nullopt;
        std::vector<Formula> picked;
        for (std::size_t a = 0; a < atom_formula.size(); ++a)
            if (meets_c1[a]) picked.push_back(atom_formula[a]);
        return OracleResult{canonical_disj(std::move(picked)), depth};
    };

    if (auto r = separator_here(0)) return r;

    for (std::size_t d = 1; d <= max_depth; ++d) {
        // Refine: group states by (valuation, set of atoms seen through <>).
        std::map<std::pair<PropMask, std::vector<int>>, int> ids;
        std::vector<int> next_atom(n);
        std::vector<Formula> next_formula;
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<int> seen;
            for (StateId t : m.successors(static_cast<StateId>(s)))
                seen.push_back(atom_of[static_cast<std::size_t>(t)]);
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            const PropMask v = m.valuation(static_cast<StateId>(s));
            auto [it, fresh] =
                ids.try_emplace({v, seen}, static_cast<int>(ids.size()));
            next_atom[s] = it->second;
            if (fresh) {
                std::vector<Formula> parts;
                for (std::size_t i = 0; i < alphabet.size(); ++i) {
                    Formula atom = Formula::atom(alphabet.name(i));
                    parts.push_back((v & (PropMask{1} << i))
                                        ? atom
                                        : Formula::negate(atom));
                }
                for (std::size_t a = 0; a < atom_formula.size(); ++a) {
                    Formula dia = Formula::dia(atom_formula[a]);
                    const bool hit =
                        std::binary_search(it->first.second.begin(),
                                           it->first.second.end(),
                                           static_cast<int>(a));
                    parts.push_back(hit ? dia : Formula::negate(dia));
                }
                next_formula.push_back(canonical_conj(std::move(parts)));
            }
        }
        const bool stabilized = next_formula.size() == atom_formula.size();
        atom_of = std::move(next_atom);
        atom_formula = std::move(next_formula);
        if (auto r = separator_here(d)) return r;
        // A fixpoint cannot refine further, so deeper formulas denote no
        // new point sets either.
        if (stabilized) return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

// First separating formula within the bounds, or nothing.  With a size
// bound the search scans the canonical enumeration in (depth, size,
// printed) order; without one it is exhaustive over all sizes up to the
// depth bound.
inline std::optional<OracleResult> oracle_separable(
    const ModelClass& c1, const ModelClass& c2, std::size_t max_depth,
    std::optional<std::size_t> max_size = std::nullopt,
    std::size_t cap = kDefaultEnumerationCap) {
    if (!max_size) return detail::oracle_closure(c1, c2, max_depth);
    Alphabet merged;
    for (const PointedModel& m : c1.members)
        merged = Alphabet::merged(merged, m.model().alphabet());
    for (const PointedModel& m : c2.members)
        merged = Alphabet::merged(merged, m.model().alphabet());
    std::vector<Formula> pool =
        enumerate_formulas(merged, max_depth, *max_size, cap);
    return detail::oracle_scan(c1, c2, pool);
}

// Same scan against a caller-supplied (already enumerated) pool, so large
// pools can be shared across many queries.
inline std::optional<OracleResult> oracle_separable(
    const ModelClass& c1, const ModelClass& c2,
    std::span<const Formula> pool) {
    return detail::oracle_scan(c1, c2, pool);
}

// Direct check of the three bisimulation clauses at every pair of the given
// relation; no refinement involved.
inline bool oracle_bisim_check(
    const KripkeModel& m,
    const std::vector<std::pair<StateId, StateId>>& relation) {
    const StateId n = static_cast<StateId>(m.num_states());
    for (auto [s, t] : relation)
        if (s < 0 || s >= n || t < 0 || t >= n)
            throw ValidationError("relation endpoint not a state");
    for (auto [s, t] : relation) {
        if (m.valuation(s) != m.valuation(t)) return false;
        for (StateId s2 : m.successors(s)) {
            bool matched = false;
            for (StateId t2 : m.successors(t))
                if (std::find(relation.begin(), relation.end(),
                              std::pair<StateId, StateId>{s2, t2}) !=
                    relation.end()) {
                    matched = true;
                    break;
                }
            if (!matched) return false;
        }
        for (StateId t2 : m.successors(t)) {
            bool matched = false;
            for (StateId s2 : m.successors(s))
                if (std::find(relation.begin(), relation.end(),
                              std::pair<StateId, StateId>{s2, t2}) !=
                    relation.end()) {
                    matched = true;
                    break;
                }
            if (!matched) return false;
        }
    }
    return true;
}

}  // namespace modal
