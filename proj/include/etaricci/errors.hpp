#pragma once

#include <stdexcept>
#include <string>

namespace etaricci {

/// Base class for every error the library throws.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Expression or manifest text that does not conform to the grammar.
/// `offset` is a 0-based byte offset into the parsed text.
struct ParseError : Error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& what)
        : Error(what + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

/// Mathematically invalid request: division by zero, pole at an evaluation
/// point, singular metric, chart mismatch, degenerate plane, and so on.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

} // namespace etaricci
