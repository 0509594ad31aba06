// Shared fixtures and generators for the test and acceptance suites.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "modal/bisim.hpp"
#include "modal/games.hpp"
#include "modal/kripke.hpp"

namespace support {

using namespace modal;

inline KripkeModel mk_model(std::vector<std::string> props,
                            std::vector<std::string> states,
                            std::vector<std::pair<StateId, StateId>> rel,
                            std::vector<PropMask> val) {
    return KripkeModel(Alphabet(std::move(props)), std::move(states),
                       std::move(rel), std::move(val));
}

// Single state with a self-loop over the empty alphabet.
inline PointedModel loop() {
    return PointedModel(mk_model({}, {"a"}, {{0, 0}}, {0}), StateId{0});
}

// Two-state cycle, bisimilar to loop().
inline PointedModel loop2() {
    return PointedModel(mk_model({}, {"a", "b"}, {{0, 1}, {1, 0}}, {0, 0}),
                        StateId{0});
}

// Walk of length k: states s0 -> s1 -> ... -> sk, pointed at s0.
inline PointedModel chain(std::size_t k) {
    std::vector<std::string> states;
    std::vector<std::pair<StateId, StateId>> rel;
    for (std::size_t i = 0; i <= k; ++i) {
        states.push_back("s" + std::to_string(i));
        if (i > 0)
            rel.emplace_back(static_cast<StateId>(i - 1),
                             static_cast<StateId>(i));
    }
    std::vector<PropMask> val(k + 1, 0);
    return PointedModel(mk_model({}, std::move(states), std::move(rel),
                                 std::move(val)),
                        StateId{0});
}

inline ModelClass cls(std::vector<PointedModel> members,
                      std::optional<std::string> label = std::nullopt) {
    return ModelClass{std::move(members), std::move(label)};
}

// {chain(1), ..., chain(n)}
inline ModelClass chains(std::size_t n) {
    ModelClass c;
    for (std::size_t k = 1; k <= n; ++k) c.members.push_back(chain(k));
    return c;
}

// ── Random generation ───────────────────────────────────────────────────────

inline PointedModel random_model(std::mt19937& rng, std::size_t max_states,
                                 std::size_t num_props) {
    std::uniform_int_distribution<std::size_t> nstates(1, max_states);
    const std::size_t n = nstates(rng);
    std::vector<std::string> states;
    for (std::size_t i = 0; i < n; ++i) states.push_back("s" + std::to_string(i));
    std::vector<std::string> props;
    for (std::size_t i = 0; i < num_props; ++i)
        props.push_back(std::string(1, static_cast<char>('p' + i)));
    std::uniform_int_distribution<int> coin(0, 99);
    std::vector<std::pair<StateId, StateId>> rel;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (coin(rng) < 35)
                rel.emplace_back(static_cast<StateId>(a),
                                 static_cast<StateId>(b));
    std::vector<PropMask> val;
    for (std::size_t s = 0; s < n; ++s) {
        PropMask m = 0;
        for (std::size_t i = 0; i < num_props; ++i)
            if (coin(rng) < 50) m |= PropMask{1} << i;
        val.push_back(m);
    }
    std::uniform_int_distribution<std::size_t> pt(0, n - 1);
    const StateId point = static_cast<StateId>(pt(rng));
    return PointedModel(mk_model(std::move(props), std::move(states),
                                 std::move(rel), std::move(val)),
                        point);
}

inline ModelClass random_class(std::mt19937& rng, std::size_t max_members,
                               std::size_t max_states, std::size_t num_props,
                               bool allow_empty = false) {
    std::uniform_int_distribution<std::size_t> nmem(allow_empty ? 0 : 1,
                                                    max_members);
    ModelClass c;
    const std::size_t n = nmem(rng);
    for (std::size_t i = 0; i < n; ++i)
        c.members.push_back(random_model(rng, max_states, num_props));
    return c;
}

// Duplicates one state of `p`; the copy keeps the valuation and out-edges,
// and each in-edge lands on the original, the copy, or both.  The folding
// map is a functional bisimulation, so the result is bisimilar to `p`.
inline PointedModel split_state_variant(std::mt19937& rng,
                                        const PointedModel& p) {
    const KripkeModel& m = p.model();
    const std::size_t n = m.num_states();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const StateId split = static_cast<StateId>(pick(rng));
    const StateId copy = static_cast<StateId>(n);

    std::vector<std::string> states = m.states();
    states.push_back(m.state_name(split) + "_copy");
    std::vector<PropMask> val = m.valuations();
    val.push_back(m.valuation(split));

    std::uniform_int_distribution<int> three(0, 2);
    std::vector<std::pair<StateId, StateId>> rel;
    for (auto [a, b] : m.relation()) {
        if (b == split) {
            switch (three(rng)) {
                case 0: rel.emplace_back(a, split); break;
                case 1: rel.emplace_back(a, copy); break;
                default:
                    rel.emplace_back(a, split);
                    rel.emplace_back(a, copy);
            }
        } else {
            rel.emplace_back(a, b);
        }
    }
    for (StateId t : m.successors(split)) rel.emplace_back(copy, t);

    return PointedModel(KripkeModel(m.alphabet(), std::move(states),
                                    std::move(rel), std::move(val)),
                        p.point());
}

// Random formula of roughly `budget` nodes over the given propositions.
inline Formula random_formula(std::mt19937& rng,
                              const std::vector<std::string>& props,
                              int budget) {
    std::uniform_int_distribution<int> kind(0, budget <= 1 ? 2 : 7);
    switch (kind(rng)) {
        case 0: return Formula::top();
        case 1: return Formula::bot();
        case 2:
            if (props.empty()) return Formula::top();
            return Formula::atom(
                props[std::uniform_int_distribution<std::size_t>(
                    0, props.size() - 1)(rng)]);
        case 3: return Formula::negate(random_formula(rng, props, budget - 1));
        case 4: return Formula::dia(random_formula(rng, props, budget - 1));
        case 5: return Formula::box(random_formula(rng, props, budget - 1));
        default: {
            std::uniform_int_distribution<int> arity(2, 3);
            const int n = arity(rng);
            std::vector<Formula> kids;
            for (int i = 0; i < n; ++i)
                kids.push_back(random_formula(rng, props, (budget - 1) / n));
            return kind(rng) % 2 ? Formula::conj(std::move(kids))
                                 : Formula::disj(std::move(kids));
        }
    }
}

// ── Exhaustive small-model universe ─────────────────────────────────────────

// Every pointed model with up to `max_states` states over alphabet {p},
// pointed at state 0, up to isomorphism (permutations of the non-point
// states).
inline std::vector<PointedModel> all_pointed_models(std::size_t max_states) {
    std::vector<PointedModel> out;
    for (std::size_t n = 1; n <= max_states; ++n) {
        const std::size_t edges = n * n;
        // Non-point permutations of {1..n-1}, as full-state maps.
        std::vector<std::vector<std::size_t>> perms;
        {
            std::vector<std::size_t> rest;
            for (std::size_t i = 1; i < n; ++i) rest.push_back(i);
            std::sort(rest.begin(), rest.end());
            do {
                std::vector<std::size_t> full(n);
                full[0] = 0;
                for (std::size_t i = 1; i < n; ++i) full[i] = rest[i - 1];
                perms.push_back(full);
            } while (std::next_permutation(rest.begin(), rest.end()));
        }
        auto encode = [&](std::uint64_t rel, std::uint64_t vals,
                          const std::vector<std::size_t>& f) {
            std::uint64_t r = 0, v = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (rel & (std::uint64_t{1} << (a * n + b)))
                        r |= std::uint64_t{1} << (f[a] * n + f[b]);
            for (std::size_t s = 0; s < n; ++s)
                if (vals & (std::uint64_t{1} << s))
                    v |= std::uint64_t{1} << f[s];
            return (r << n) | v;
        };
        for (std::uint64_t rel = 0; rel < (std::uint64_t{1} << edges); ++rel) {
            for (std::uint64_t vals = 0; vals < (std::uint64_t{1} << n); ++vals) {
                const std::uint64_t self = encode(rel, vals, perms.front());
                bool canonical = true;
                for (const auto& f : perms)
                    if (encode(rel, vals, f) < self) {
                        canonical = false;
                        break;
                    }
                if (!canonical) continue;
                std::vector<std::string> states;
                for (std::size_t i = 0; i < n; ++i)
                    states.push_back("s" + std::to_string(i));
                std::vector<std::pair<StateId, StateId>> relation;
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        if (rel & (std::uint64_t{1} << (a * n + b)))
                            relation.emplace_back(static_cast<StateId>(a),
                                                  static_cast<StateId>(b));
                std::vector<PropMask> val;
                for (std::size_t s = 0; s < n; ++s)
                    val.push_back((vals >> s) & 1);
                out.emplace_back(mk_model({"p"}, std::move(states),
                                          std::move(relation), std::move(val)),
                                 StateId{0});
            }
        }
    }
    return out;
}

// ── Game play-outs ──────────────────────────────────────────────────────────

// Plays the strategy's recommendation for Spoiler against every Verifier
// reply; true iff Spoiler wins every line within `budget` rounds.
inline bool spoiler_playout_wins(const Strategy& s, const GamePosition& g,
                                 std::size_t budget) {
    Move m = s.recommend(g);
    StepOutcome after = step(g, m);
    if (after.terminal()) return *after.verdict == Player::Spoiler;
    const GamePosition& pend = *after.position;
    const bool reply_left = !pend.pending->first;
    const KripkeModel& side = reply_left ? pend.left_model().model()
                                         : pend.right_model().model();
    const StateId from = reply_left ? pend.left : pend.right;
    for (StateId t : side.successors(from)) {
        StepOutcome next = step(pend, Move::verifier(t));
        if (next.terminal()) {
            if (*next.verdict != Player::Spoiler) return false;
            continue;
        }
        if (next.position->elapsed >= budget) return false;
        if (!spoiler_playout_wins(s, *next.position, budget)) return false;
    }
    return true;
}

// Plays the strategy's recommendation for Verifier against every Spoiler
// line; true iff Verifier never loses within the game's bound.
inline bool verifier_playout_survives(const Strategy& s, const GamePosition& g) {
    const GamePosition* cur = &g;
    const KripkeModel& lm = g.left_model().model();
    const KripkeModel& rm = g.right_model().model();
    for (int side = 0; side < 2; ++side) {
        const bool on_left = side == 0;
        const KripkeModel& m = on_left ? lm : rm;
        const StateId from = on_left ? cur->left : cur->right;
        for (StateId t : m.successors(from)) {
            StepOutcome mid = step(*cur, Move::spoiler(on_left, t));
            if (mid.terminal()) {
                if (*mid.verdict == Player::Spoiler) return false;
                continue;
            }
            StepOutcome next = step(*mid.position, s.recommend(*mid.position));
            if (next.terminal()) {
                if (*next.verdict == Player::Spoiler) return false;
                continue;
            }
            if (!verifier_playout_survives(s, *next.position)) return false;
        }
    }
    return true;
}

}  // namespace support
