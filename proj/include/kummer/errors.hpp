#pragma once

#include <stdexcept>
#include <string>

namespace kummer {

// Base for everything this library throws on a contract violation.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A result would carry zero guaranteed digits, or a predicate cannot be
// decided at the precision the operands carry.
struct precision_error : error {
    explicit precision_error(const std::string& what) : error(what) {}
};

// Inversion or division by a value indistinguishable from zero.
struct zero_division_error : error {
    explicit zero_division_error(const std::string& what) : error(what) {}
};

// sqrt of a certified non-square.
struct nonsquare_error : error {
    explicit nonsquare_error(const std::string& what) : error(what) {}
};

// Hensel root search could not separate candidate roots within budget.
struct separation_error : precision_error {
    explicit separation_error(const std::string& what) : precision_error(what) {}
};

// Precondition violation on mathematical inputs (singular curve, bad prime,
// index out of range, point off curve).
struct domain_error : error {
    explicit domain_error(const std::string& what) : error(what) {}
};

// Reduction kind not supported by the requested analysis.
struct reduction_error : error {
    explicit reduction_error(const std::string& what) : error(what) {}
};

// A bounded search (generator sweep, curve enumeration, coset probe) ran out
// of budget before reaching a conclusion.
struct budget_error : error {
    explicit budget_error(const std::string& what) : error(what) {}
};

} // namespace kummer
