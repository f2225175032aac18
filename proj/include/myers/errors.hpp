#pragma once

#include <stdexcept>
#include <string>

namespace myers {

/// Base class for all toolkit errors. `code()` is a stable machine-readable
/// identifier used by the CLI when reporting failures.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Argument outside the domain of an operation (r below domain_start,
/// p <= 2 for a p>2 threshold, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& message)
        : Error("domain_error", message) {}
};

/// A test function failed its positivity requirement.
class PositivityError : public Error {
public:
    explicit PositivityError(const std::string& message)
        : Error("positivity_violation", message) {}
};

/// A test function does not satisfy its declared monotonicity.
class MonotonicityError : public Error {
public:
    explicit MonotonicityError(const std::string& message)
        : Error("non_monotone", message) {}
};

/// Improper integral with no finite truncation point (divergent tail or
/// test function not bounded below on the tail).
class UnboundedDomainError : public Error {
public:
    explicit UnboundedDomainError(const std::string& message)
        : Error("unbounded_domain", message) {}
};

/// Adaptive quadrature hit the subdivision depth limit. Carries the best
/// estimate produced before giving up.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& message, double best_value, double best_error)
        : Error("quadrature_failure", message),
          best_value_(best_value),
          best_error_(best_error) {}

    double best_value() const noexcept { return best_value_; }
    double best_error() const noexcept { return best_error_; }

private:
    double best_value_;
    double best_error_;
};

/// ODE integration failed (step-size underflow, blow-up). `where()` is the
/// radius at which integration stopped.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& message, double where)
        : Error("integration_failure", message), where_(where) {}

    double where() const noexcept { return where_; }

private:
    double where_;
};

/// One-dimensional maximization could not bracket a maximum.
class OptimizationError : public Error {
public:
    explicit OptimizationError(const std::string& message)
        : Error("optimization_failure", message) {}
};

/// Caller violated an operation precondition (missing conjugate radius,
/// mismatched intervals, ...).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& message)
        : Error("precondition", message) {}
};

/// Job description failed schema validation.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message)
        : Error("validation_error", message) {}
};

}  // namespace myers
