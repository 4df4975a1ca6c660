#pragma once

#include <stdexcept>
#include <string>

namespace heisenvt {

/// Thrown when a residue is not known to enough p-adic digits for the
/// requested pairing, representation value or operator application.
class InsufficientPrecision : public std::runtime_error {
public:
    explicit InsufficientPrecision(const std::string& what)
        : std::runtime_error(what) {}
};

/// Thrown when operands live at different truncation levels (or primes).
class LevelMismatch : public std::invalid_argument {
public:
    explicit LevelMismatch(const std::string& what)
        : std::invalid_argument(what) {}
};

/// Thrown when a dense enumeration or dense eigensolve would exceed the
/// configured size budget.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace heisenvt
