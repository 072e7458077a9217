#pragma once

#include <stdexcept>
#include <string>

namespace perron {

/// Malformed or out-of-range input: parse failures, bad ids, invalid edits.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
    InputError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    /// 1-based source line, or 0 when the error is not tied to a file line.
    int line() const noexcept { return line_; }

private:
    int line_ = 0;
};

/// Iterative solve failed to converge, or the result violates Perron structure.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The request is well formed but cannot be satisfied (no feasible edge, size cap).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace perron
