#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace concur {

// Malformed tabular input. Carries the 1-based line number when known (0 otherwise).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed input carrying an illegal value (score out of range, duplicate label, ...).
class ValueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (shape mismatch, N <= d, ...).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Linear algebra failure (SVD non-convergence, repeated rank deficiency).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input for which the weighted distance is undefined (all-zero concurrence matrix).
class DegenerateInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace concur
