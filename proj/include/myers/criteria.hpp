#pragma once

#include <optional>
#include <string>
#include <utility>

#include "myers/functional.hpp"
#include "myers/profiles.hpp"

namespace myers {

/// Compactness conclusion from maximizing the functional over a family of
/// test functions. `margin` is measured against the strict threshold
/// 1 + max(1e-9, 3 * quadrature error), so kind == compact iff margin > 0.
struct Verdict {
    enum class Kind { compact, inconclusive };
    Kind kind = Kind::inconclusive;
    double criterion_value = 0.0;
    double margin = 0.0;
    std::string witness;
    std::string assumptions;
};

/// Search space for the test function in compactness_verdict.
struct PsiSearch {
    enum class Kind { constant_scan, fixed, sqrt_profile };
    Kind kind = Kind::constant_scan;
    std::optional<TestFunction> fixed_psi;

    static PsiSearch constants() { return {Kind::constant_scan, std::nullopt}; }
    static PsiSearch fixed(TestFunction psi) { return {Kind::fixed, std::move(psi)}; }
    static PsiSearch sqrt_profile() { return {Kind::sqrt_profile, std::nullopt}; }
};

/// Maximize F(q, ψ, a, ∞) over the search space; compact iff the maximum
/// strictly exceeds 1 (beyond quadrature error). A divergent tail falls back
/// to growing finite horizons: finding any finite b with F(q, ψ, a, b) > 1
/// is already conclusive, otherwise the verdict is inconclusive with the
/// reason recorded in the witness.
Verdict compactness_verdict(const RadialProfile& q, double a, const PsiSearch& search,
                            double tol = kDefaultTol);

/// Golden-section maximization of x -> F(q, constant(x), a, ∞) over log x.
/// Returns (x_star, F_star). Requires a finite tail bound for q.
std::pair<double, double> optimize_constant_psi(const RadialProfile& q, double a,
                                                double tol = kDefaultTol);

/// Smallest l <= L_max with segment lhs(l) >= rhs(l): geometric scan (64
/// points per decade) followed by bisection to relative tolerance 1e-12.
/// l is +inf when the criterion is never met.
struct DiameterBound {
    double l = 0.0;
    std::string psi_used;
    double lhs_at_l = 0.0;
    double rhs_at_l = 0.0;
};

DiameterBound diameter_bound(const RadialProfile& q, const TestFunction& psi,
                             double tol = kDefaultTol, double l_max = 1e6);

/// Compactness threshold c(p, a) = p^{2p} sin^p(π/p) / (4π^p) (a/(p-2))^{p-2}
/// for q = c/r^p, r >= a, p > 2.
double poly_threshold(double p, double a);

/// Wan's threshold (p-1)^p / (p-2)^{p-2} r0^{p-2}, p > 2 (comparison
/// baseline; strictly larger than poly_threshold).
double wan_threshold(double p, double r0);

/// Cheeger-Gromov-Taylor diameter e^mu / r0 for q = (1/4 + mu)/r^2.
double cgt_diameter(double mu, double r0);

/// For q = c e^{-p r}: (compactness threshold 2p²/log²3,
/// diameter (1/p) log(e²c / (c - (e²-1)p²)) when c > (e²-1)p², else +inf).
std::pair<double, double> exp_thresholds(double c, double p);

/// Closed forms of the functional for the special test-function choices,
/// used as oracles against eval_F.
///   q = c/r², ψ = √c/r:        (√c/2 - ¼) log(b/a)
///   q = c/r^p (p<2), ψ = √q:   √c (b^{1-p/2} - a^{1-p/2})/(2-p) - (p/8) log(b/a)
///   q = c e^{-pr}, ψ = x:      (x/p) log(1 + c e^{-pt}/x²)        (tail [t, ∞))
///                              (x/p) log((x²+c)/(x²+c e^{-pρ}))   (interval [0, ρ])
double closed_form_p2(double c, double a, double b);
double closed_form_p_lt2(double c, double p, double a, double b);
double closed_form_exp_tail(double x, double c, double p, double t);
double closed_form_exp_interval(double x, double c, double p, double rho);

/// The analytic lower-bound machinery for the polynomial case (p > 2):
/// maximizer and value of max_x { -a x + (π/p)/sin(π/p) c^{1/p} x^{1-2/p} },
/// a lower bound on max_x F(c/r^p, x, a, ∞).
double poly_bound_optimal_x(double c, double p, double a);
double poly_bound_value(double c, double p, double a);

}  // namespace myers
