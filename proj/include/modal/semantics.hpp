// ============================================================================
// modal/semantics.hpp — Kripke semantics, class satisfaction, separation
// ============================================================================

#pragma once

#include <unordered_map>
#include <vector>

#include "modal/formula.hpp"
#include "modal/kripke.hpp"

namespace modal {

namespace detail {

inline void check_atoms(const Formula& f, const Alphabet& a) {
    switch (f.kind()) {
        case Formula::Kind::Atom:
            if (!a.index_of(f.atom_name()))
                throw EvalError("unknown atom '" + f.atom_name() + "'");
            return;
        case Formula::Kind::Top:
        case Formula::Kind::Bot:
            return;
        default:
            for (const Formula& c : f.children()) check_atoms(c, a);
    }
}

}  // namespace detail

// Per-state truth values of formulas over one model, memoized on shared
// subtrees.  Reusing one cache across many formulas from the same
// enumeration makes brute-force scans linear in the number of distinct
// subformulas.
class DenotationCache {
public:
    explicit DenotationCache(const KripkeModel& m) : m_(&m) {}

    const std::vector<char>& get(const Formula& f) {
        auto it = memo_.find(f.id());
        if (it != memo_.end()) return it->second;
        detail::check_atoms(f, m_->alphabet());
        return compute(f);
    }

private:
    const std::vector<char>& compute(const Formula& f) {
        auto it = memo_.find(f.id());
        if (it != memo_.end()) return it->second;
        const std::size_t n = m_->num_states();
        std::vector<char> v(n, 0);
        using K = Formula::Kind;
        switch (f.kind()) {
            case K::Top:
                v.assign(n, 1);
                break;
            case K::Bot:
                break;
            case K::Atom: {
                const PropMask bit = PropMask{1}
                                     << *m_->alphabet().index_of(f.atom_name());
                for (std::size_t s = 0; s < n; ++s)
                    v[s] = (m_->valuation(static_cast<StateId>(s)) & bit) != 0;
                break;
            }
            case K::Not: {
                const std::vector<char>& c = compute(f.child());
                for (std::size_t s = 0; s < n; ++s) v[s] = !c[s];
                break;
            }
            case K::And: {
                v.assign(n, 1);
                for (const Formula& k : f.children()) {
                    const std::vector<char>& c = compute(k);
                    for (std::size_t s = 0; s < n; ++s) v[s] &= c[s];
                }
                break;
            }
            case K::Or: {
                for (const Formula& k : f.children()) {
                    const std::vector<char>& c = compute(k);
                    for (std::size_t s = 0; s < n; ++s) v[s] |= c[s];
                }
                break;
            }
            case K::Dia: {
                const std::vector<char>& c = compute(f.child());
                for (std::size_t s = 0; s < n; ++s)
                    for (StateId t : m_->successors(static_cast<StateId>(s)))
                        if (c[static_cast<std::size_t>(t)]) {
                            v[s] = 1;
                            break;
                        }
                break;
            }
            case K::Box: {
                const std::vector<char>& c = compute(f.child());
                for (std::size_t s = 0; s < n; ++s) {
                    v[s] = 1;
                    for (StateId t : m_->successors(static_cast<StateId>(s)))
                        if (!c[static_cast<std::size_t>(t)]) {
                            v[s] = 0;
                            break;
                        }
                }
                break;
            }
        }
        return memo_.emplace(f.id(), std::move(v)).first->second;
    }

    const KripkeModel* m_;
    std::unordered_map<const void*, std::vector<char>> memo_;
};

// Truth set of `f` over all states of `m`.
inline std::vector<char> denotation(const KripkeModel& m, const Formula& f) {
    DenotationCache cache(m);
    return cache.get(f);
}

// Standard Kripke satisfaction at the designated point; <> is "some
// successor", [] is "every successor".
inline bool eval(const PointedModel& p, const Formula& f) {
    return denotation(p.model(), f)[static_cast<std::size_t>(p.point())] != 0;
}

// C |= f: every member satisfies f; vacuously true for the empty class.
inline bool class_models(const ModelClass& c, const Formula& f) {
    for (const PointedModel& m : c.members)
        if (!eval(m, f)) return false;
    return true;
}

enum class SepPolarity { Forward, Reverse, None };

// Does f separate c1 from c2?  Forward: true on all of c1 and false on all
// of c2; Reverse: the other way around.  Forward is checked first, so a
// formula separating a pair of empty classes reports Forward.
inline SepPolarity sep_check(const ModelClass& c1, const ModelClass& c2,
                             const Formula& f) {
    bool fwd = true, rev = true;
    for (const PointedModel& m : c1.members) {
        const bool v = eval(m, f);
        fwd &= v;
        rev &= !v;
        if (!fwd && !rev) return SepPolarity::None;
    }
    for (const PointedModel& m : c2.members) {
        const bool v = eval(m, f);
        fwd &= !v;
        rev &= v;
        if (!fwd && !rev) return SepPolarity::None;
    }
    if (fwd) return SepPolarity::Forward;
    if (rev) return SepPolarity::Reverse;
    return SepPolarity::None;
}

}  // namespace modal
