#pragma once

#include <stdexcept>
#include <string>

namespace sgdnet {

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input whose content is unusable (zero ratings, empty files, bad magics).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument values or incompatible shapes.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values appeared in a computation.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A condition the library guarantees cannot happen.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace sgdnet
