#pragma once

#include <optional>
#include <utility>

#include "myers/profiles.hpp"

namespace myers {

/// Result of evaluating the functional over [a, b]:
///   value = ∫_a^b ψq/(ψ²+q) dr  -  ¼ log(ψ(a)/ψ(b))   (log term only for
/// non-increasing ψ; zero for non-decreasing ψ).
struct FunctionalValue {
    double integral = 0.0;    // the quadrature part, >= 0 for q >= 0
    double correction = 0.0;  // the -¼ log(ψ(a)/ψ(b)) branch term
    double value = 0.0;       // integral + correction
    double abs_error_estimate = 0.0;
    std::optional<double> truncated_at;  // set when b = ∞ was truncated
};

inline constexpr double kDefaultTol = 1e-10;

/// Evaluate the functional. `b` may be +inf, in which case the integral is
/// truncated at a radius R* where (tail bound of q) / inf_{r>=R*} ψ <= tol/10
/// and the dropped tail is added to the error estimate. Throws
/// UnboundedDomainError when no such truncation exists.
FunctionalValue eval_F(const RadialProfile& q, const TestFunction& psi, double a, double b,
                       double tol = kDefaultTol);

/// Segment criterion at length l:
///   lhs = ∫_0^l ψq/(ψ²+q) dr,   rhs = 2 + ¼|log(ψ(l)/ψ(0))|.
/// lhs >= rhs certifies diameter <= l.
std::pair<double, double> eval_segment_criterion(const RadialProfile& q, const TestFunction& psi,
                                                 double l, double tol = kDefaultTol);

/// Lower bound on the radial mean curvature at a implied by a functional
/// value F < 1: ψ(a)·F/(1-F). Returns +inf when F >= 1 (criterion violated,
/// no ray).
double mean_curvature_lower_bound(const FunctionalValue& F, const TestFunction& psi, double a);

/// Calabi baseline: lhs = ∫_a^b sqrt(q) dr, rhs = sqrt(¼ ln²(b/a) + ln(b/a)).
std::pair<double, double> calabi_bound(const RadialProfile& q, double a, double b,
                                       double tol = kDefaultTol);

/// Tail criterion: lhs = ∫_a^∞ q dr (truncated using the closed-form tail
/// bound), rhs = 1/a. lhs > rhs rules out a ray from the base point.
std::pair<double, double> ray_tail_check(const RadialProfile& q, double a,
                                         double tol = kDefaultTol);

namespace detail {
/// The integrand ψq/(ψ²+q) with the pointwise cap min(ψ, q/ψ) asserted at
/// every evaluation. Exposed for tests.
double functional_integrand(const RadialProfile& q, const TestFunction& psi, double r);
}  // namespace detail

}  // namespace myers
