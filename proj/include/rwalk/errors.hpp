#pragma once

#include <stdexcept>
#include <string>

namespace rwalk {

// Precondition violation: bad parameter domain, mismatched dimensions, ...
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
    static constexpr const char* code() { return "domain"; }
};

// A work or memory limit was exceeded; the message names the offending sizes.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr const char* code() { return "budget"; }
};

// A requested region contains no admissible lattice point.
class EmptyRegionError : public std::runtime_error {
public:
    explicit EmptyRegionError(const std::string& msg) : std::runtime_error(msg) {}
    static constexpr const char* code() { return "empty-region"; }
};

} // namespace rwalk
