#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace modal {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed formula / model text. Carries the byte offset of the failure.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& msg)
        : Error("parse error at byte " + std::to_string(offset) + ": " + msg),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Structurally well-formed input that violates a model invariant
// (undeclared state in a relation, valuation outside the alphabet, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Evaluation of a formula whose atoms are not all in the model's alphabet.
class EvalError : public Error {
public:
    using Error::Error;
};

// A configured resource ceiling (enumeration cap, unraveling state cap,
// formula size cap) was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

// A game move that is not legal at the current position.
class IllegalMoveError : public Error {
public:
    using Error::Error;
};

}  // namespace modal
