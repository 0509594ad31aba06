// ============================================================================
// modal/enumerate.hpp — canonical formula enumeration
// ============================================================================
//
// Generates every formula over an alphabet within a modal-depth and node-count
// bound, modulo the structural canonicalization used throughout: children of
// And/Or strictly sorted by printed form (which also removes duplicates).
// Every formula within the bounds canonicalizes to a member of the sequence
// without growing, so the sequence is complete up to semantic equivalence
// over any universe.
//
// The result is sorted by (modal depth, node count, printed form), which is
// the search order the brute-force oracle relies on.
//
// ============================================================================

#pragma once

#include <string>
#include <vector>

#include "modal/formula.hpp"

namespace modal {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

namespace detail {

using PrintedFormula = std::pair<std::string, Formula>;

// Chooses strictly increasing indices into the printed-sorted pool whose
// sizes sum exactly to `budget`, arity >= 2.  Children picked this way are
// already in canonical order.
template <typename Emit>
inline void combos_into(const std::vector<PrintedFormula>& pool,
                        std::size_t first, std::size_t budget,
                        std::vector<Formula>& chosen, Emit&& emit) {
    if (budget == 0) {
        if (chosen.size() >= 2) emit(chosen);
        return;
    }
    for (std::size_t i = first; i < pool.size(); ++i) {
        const std::size_t sz = pool[i].second.size();
        if (sz > budget) continue;
        // A lone child must still leave room for a second one.
        if (chosen.empty() && sz == budget) continue;
        chosen.push_back(pool[i].second);
        combos_into(pool, i + 1, budget - sz, chosen, emit);
        chosen.pop_back();
    }
}

}  // namespace detail

inline std::vector<Formula> enumerate_formulas(
    const Alphabet& a, std::size_t max_depth, std::size_t max_size,
    std::size_t cap = kDefaultEnumerationCap) {
    if (max_size < 1)
        throw std::invalid_argument("enumerate_formulas: max_size must be >= 1");

    std::vector<detail::PrintedFormula> all;  // kept sorted by printed form
    auto add = [&](Formula f) {
        if (all.size() >= cap)
            throw ResourceError("formula enumeration exceeds cap of " +
                                std::to_string(cap));
        all.emplace_back(print_formula(f), std::move(f));
    };
    auto printed_less = [](const detail::PrintedFormula& x,
                           const detail::PrintedFormula& y) {
        return x.first < y.first;
    };

    add(Formula::bot());
    add(Formula::top());
    for (const std::string& p : a.props()) add(Formula::atom(p));
    std::sort(all.begin(), all.end(), printed_less);

    for (std::size_t size = 2; size <= max_size; ++size) {
        std::vector<Formula> fresh;
        for (const auto& [_, f] : all) {
            if (f.size() != size - 1) continue;
            fresh.push_back(Formula::negate(f));
            if (f.depth() < max_depth) {
                fresh.push_back(Formula::dia(f));
                fresh.push_back(Formula::box(f));
            }
        }
        std::vector<Formula> chosen;
        detail::combos_into(all, 0, size - 1, chosen,
                            [&](const std::vector<Formula>& kids) {
                                fresh.push_back(Formula::conj(kids));
                                fresh.push_back(Formula::disj(kids));
                            });
        for (Formula& f : fresh) add(std::move(f));
        std::sort(all.begin(), all.end(), printed_less);
    }

    std::sort(all.begin(), all.end(),
              [](const detail::PrintedFormula& x, const detail::PrintedFormula& y) {
                  if (x.second.depth() != y.second.depth())
                      return x.second.depth() < y.second.depth();
                  if (x.second.size() != y.second.size())
                      return x.second.size() < y.second.size();
                  return x.first < y.first;
              });

    std::vector<Formula> out;
    out.reserve(all.size());
    for (auto& [_, f] : all) out.push_back(std::move(f));
    return out;
}

}  // namespace modal
