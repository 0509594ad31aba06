// ============================================================================
// modal/formula.hpp — modal formula trees, concrete syntax, measures
// ============================================================================
//
// Formulas are immutable trees shared through shared_ptr; copying a Formula
// is cheap and all operations on it are pure.  Conjunction and disjunction
// are n-ary with arity >= 2: the smart constructors collapse the nullary
// case to true/false and the unary case to the child itself.
//
// Concrete syntax (ASCII):
//
//   formula := disj ; disj := conj { "|" conj } ; conj := unary { "&" unary }
//   unary   := "!" unary | "<>" unary | "[]" unary | atom
//   atom    := "true" | "false" | ident | "(" formula ")"
//   ident   := [a-zA-Z_][a-zA-Z0-9_]*  (excluding keywords)
//
// "&" binds tighter than "|"; both are left-associative in the grammar but
// parse into flat n-ary nodes, so "a & b & c" is one And with 3 children
// while "a & (b & c)" keeps the nested shape.  print_formula emits minimal
// parentheses and round-trips: parse_formula(print_formula(f)) == f.
//
// ============================================================================

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modal/errors.hpp"

namespace modal {

// Proposition names share the formula grammar's identifier shape, so any
// formula over a declared alphabet prints and re-parses losslessly.
inline bool valid_proposition_name(std::string_view name) {
    if (name.empty() || name == "true" || name == "false") return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
        return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

class Formula {
public:
    enum class Kind : unsigned char { Top, Bot, Atom, Not, And, Or, Dia, Box };

    Formula() : Formula(top()) {}

    static Formula top() {
        static const Formula f{make(Kind::Top, "", {})};
        return f;
    }
    static Formula bot() {
        static const Formula f{make(Kind::Bot, "", {})};
        return f;
    }
    static Formula atom(std::string name) {
        if (!valid_proposition_name(name))
            throw ValidationError("'" + name + "' is not a proposition name");
        return Formula{make(Kind::Atom, std::move(name), {})};
    }
    static Formula negate(Formula f) {
        return Formula{make(Kind::Not, "", {std::move(f)})};
    }
    static Formula dia(Formula f) {
        return Formula{make(Kind::Dia, "", {std::move(f)})};
    }
    static Formula box(Formula f) {
        return Formula{make(Kind::Box, "", {std::move(f)})};
    }

    // N-ary conjunction; arity 0 collapses to true, arity 1 to the child.
    static Formula conj(std::vector<Formula> kids) {
        if (kids.empty()) return top();
        if (kids.size() == 1) return kids.front();
        return Formula{make(Kind::And, "", std::move(kids))};
    }

    // N-ary disjunction; arity 0 collapses to false, arity 1 to the child.
    static Formula disj(std::vector<Formula> kids) {
        if (kids.empty()) return bot();
        if (kids.size() == 1) return kids.front();
        return Formula{make(Kind::Or, "", std::move(kids))};
    }

    Kind kind() const noexcept { return n_->kind; }
    const std::string& atom_name() const noexcept { return n_->name; }
    const std::vector<Formula>& children() const noexcept { return n_->kids; }
    const Formula& child() const noexcept { return n_->kids.front(); }

    // Node count of the tree (children counted through sharing).
    std::size_t size() const noexcept { return n_->size; }
    // Nesting count of <> / [].
    std::size_t depth() const noexcept { return n_->depth; }

    // Stable identity of the underlying node, usable as a memoization key.
    const void* id() const noexcept { return n_.get(); }

    bool operator==(const Formula& o) const {
        if (n_ == o.n_) return true;
        if (n_->kind != o.n_->kind || n_->size != o.n_->size) return false;
        if (n_->kind == Kind::Atom) return n_->name == o.n_->name;
        if (n_->kids.size() != o.n_->kids.size()) return false;
        for (std::size_t i = 0; i < n_->kids.size(); ++i)
            if (!(n_->kids[i] == o.n_->kids[i])) return false;
        return true;
    }
    bool operator!=(const Formula& o) const { return !(*this == o); }

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<Formula> kids;
        std::uint32_t size;
        std::uint32_t depth;
    };

    static std::shared_ptr<const Node> make(Kind k, std::string name,
                                            std::vector<Formula> kids) {
        std::uint32_t size = 1, depth = 0;
        for (const Formula& c : kids) {
            size += c.n_->size;
            depth = std::max(depth, c.n_->depth);
        }
        if (k == Kind::Dia || k == Kind::Box) ++depth;
        return std::make_shared<const Node>(
            Node{k, std::move(name), std::move(kids), size, depth});
    }

    explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    std::shared_ptr<const Node> n_;
};

inline std::size_t modal_depth(const Formula& f) { return f.depth(); }
inline std::size_t formula_size(const Formula& f) { return f.size(); }

// ── Printing ────────────────────────────────────────────────────────────────

namespace detail {

inline void print_into(const Formula& f, std::string& out) {
    using K = Formula::Kind;
    auto print_operand = [&out](const Formula& g, bool needs_parens) {
        if (needs_parens) {
            out += '(';
            print_into(g, out);
            out += ')';
        } else {
            print_into(g, out);
        }
    };
    switch (f.kind()) {
        case K::Top: out += "true"; return;
        case K::Bot: out += "false"; return;
        case K::Atom: out += f.atom_name(); return;
        case K::Not: {
            out += '!';
            const K ck = f.child().kind();
            print_operand(f.child(), ck == K::And || ck == K::Or);
            return;
        }
        case K::Dia:
        case K::Box: {
            out += (f.kind() == K::Dia) ? "<> " : "[] ";
            const K ck = f.child().kind();
            print_operand(f.child(), ck == K::And || ck == K::Or);
            return;
        }
        case K::And: {
            bool first = true;
            for (const Formula& c : f.children()) {
                if (!first) out += " & ";
                first = false;
                const K ck = c.kind();
                print_operand(c, ck == K::And || ck == K::Or);
            }
            return;
        }
        case K::Or: {
            bool first = true;
            for (const Formula& c : f.children()) {
                if (!first) out += " | ";
                first = false;
                print_operand(c, c.kind() == K::Or);
            }
            return;
        }
    }
}

}  // namespace detail

inline std::string print_formula(const Formula& f) {
    std::string out;
    detail::print_into(f, out);
    return out;
}

// Children sorted by printed form with duplicates removed; no other
// simplification, so constructed witnesses keep their shape readable.
inline Formula canonical_conj(std::vector<Formula> kids) {
    std::vector<std::pair<std::string, Formula>> keyed;
    keyed.reserve(kids.size());
    for (Formula& k : kids) keyed.emplace_back(print_formula(k), std::move(k));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(),
                            [](const auto& a, const auto& b) {
                                return a.first == b.first;
                            }),
                keyed.end());
    std::vector<Formula> out;
    out.reserve(keyed.size());
    for (auto& [_, f] : keyed) out.push_back(std::move(f));
    return Formula::conj(std::move(out));
}

inline Formula canonical_disj(std::vector<Formula> kids) {
    std::vector<std::pair<std::string, Formula>> keyed;
    keyed.reserve(kids.size());
    for (Formula& k : kids) keyed.emplace_back(print_formula(k), std::move(k));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(),
                            [](const auto& a, const auto& b) {
                                return a.first == b.first;
                            }),
                keyed.end());
    std::vector<Formula> out;
    out.reserve(keyed.size());
    for (auto& [_, f] : keyed) out.push_back(std::move(f));
    return Formula::disj(std::move(out));
}

// The structural canonical form: And/Or children recursively sorted by
// printed form, duplicates removed.  Preserves semantics and never grows.
inline Formula canonicalize(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::Top:
        case K::Bot:
        case K::Atom:
            return f;
        case K::Not: return Formula::negate(canonicalize(f.child()));
        case K::Dia: return Formula::dia(canonicalize(f.child()));
        case K::Box: return Formula::box(canonicalize(f.child()));
        case K::And:
        case K::Or: {
            std::vector<Formula> kids;
            kids.reserve(f.children().size());
            for (const Formula& c : f.children()) kids.push_back(canonicalize(c));
            return f.kind() == K::And ? canonical_conj(std::move(kids))
                                      : canonical_disj(std::move(kids));
        }
    }
    return f;
}

// ── Parsing ─────────────────────────────────────────────────────────────────

namespace detail {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula parse() {
        Formula f = parse_disj();
        skip_ws();
        if (pos_ != text_.size())
            fail("expected end of input or connective");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = pos_ < text_.size()
                                ? "'" + std::string(1, text_[pos_]) + "'"
                                : "end of input";
        throw ParseError(pos_, "expected " + expected + ", found " + found);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Formula parse_disj() {
        std::vector<Formula> kids{parse_conj()};
        while (eat("|")) kids.push_back(parse_conj());
        return Formula::disj(std::move(kids));
    }

    Formula parse_conj() {
        std::vector<Formula> kids{parse_unary()};
        while (eat("&")) kids.push_back(parse_unary());
        return Formula::conj(std::move(kids));
    }

    Formula parse_unary() {
        if (eat("!")) return Formula::negate(parse_unary());
        if (eat("<>")) return Formula::dia(parse_unary());
        if (eat("[]")) return Formula::box(parse_unary());
        return parse_atom();
    }

    Formula parse_atom() {
        skip_ws();
        if (eat("(")) {
            Formula f = parse_disj();
            if (!eat(")")) fail("')'");
            return f;
        }
        if (pos_ >= text_.size()) fail("formula");
        char c = text_[pos_];
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_')
            fail("formula");
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
            ++pos_;
        std::string_view ident = text_.substr(start, pos_ - start);
        if (ident == "true") return Formula::top();
        if (ident == "false") return Formula::bot();
        return Formula::atom(std::string(ident));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
    return detail::FormulaParser(text).parse();
}

// ── Alphabet ────────────────────────────────────────────────────────────────
// Ordered, duplicate-free proposition names.  The order is the declaration
// order and fixes enumeration and printing determinism.  Valuations are
// stored as 64-bit masks, so at most 64 propositions are supported.

inline constexpr std::size_t kMaxPropositions = 64;

class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> props) : props_(std::move(props)) {
        if (props_.size() > kMaxPropositions)
            throw ValidationError("alphabet exceeds " +
                                  std::to_string(kMaxPropositions) +
                                  " propositions");
        for (std::size_t i = 0; i < props_.size(); ++i) {
            if (!valid_proposition_name(props_[i]))
                throw ValidationError("'" + props_[i] +
                                      "' is not a proposition name");
            for (std::size_t j = i + 1; j < props_.size(); ++j)
                if (props_[i] == props_[j])
                    throw ValidationError("duplicate proposition '" + props_[i] +
                                          "' in alphabet");
        }
    }

    std::size_t size() const noexcept { return props_.size(); }
    const std::vector<std::string>& props() const noexcept { return props_; }
    const std::string& name(std::size_t i) const { return props_[i]; }

    std::optional<std::size_t> index_of(std::string_view p) const {
        for (std::size_t i = 0; i < props_.size(); ++i)
            if (props_[i] == p) return i;
        return std::nullopt;
    }

    // Union keeping this alphabet's order first, then unseen props of `o`.
    static Alphabet merged(const Alphabet& a, const Alphabet& b) {
        std::vector<std::string> props = a.props_;
        for (const std::string& p : b.props_)
            if (!a.index_of(p)) props.push_back(p);
        return Alphabet(std::move(props));
    }

    bool operator==(const Alphabet& o) const { return props_ == o.props_; }

private:
    std::vector<std::string> props_;
};

}  // namespace modal
