#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace myers {

namespace detail {
struct ProfileImpl;
struct TestFunctionImpl;
}  // namespace detail

/// Averaged radial Ricci lower bound q(r) >= 0 along a geodesic. Immutable
/// after construction; copies share the underlying description.
///
/// Families:
///   constant(c)            q(r) = c
///   poly_decay(c,p,a0)     q(r) = c / max(r, a0)^p   (constant on [0, a0])
///   exp_decay(c,p)         q(r) = c e^{-p r}
///   piecewise              contiguous sub-profiles
///   sampled                piecewise-linear table, constant-extended to a
///                          declared horizon; evaluation past it is an error
class RadialProfile {
public:
    enum class Family { constant, poly_decay, exp_decay, piecewise, sampled };

    static RadialProfile constant(double c);
    static RadialProfile poly_decay(double c, double p, double cutoff);
    static RadialProfile exp_decay(double c, double p);
    /// pieces = (start_i, profile_i); piece i covers [start_i, start_{i+1}),
    /// the last piece extends to `end` (default unbounded).
    static RadialProfile piecewise(std::vector<std::pair<double, RadialProfile>> pieces,
                                   double end = infinite_radius());
    static RadialProfile sampled(std::vector<double> radii, std::vector<double> values,
                                 double horizon);

    double value(double r) const;
    double operator()(double r) const { return value(r); }
    /// dq/dr, one-sided at kinks (cutoffs, joints, table nodes).
    double derivative(double r) const;

    /// Upper bound on the tail integral ∫_R^∞ q dr; +inf when the tail
    /// diverges or is unknown (positive constants, sampled tables).
    double tail_bound(double R) const;

    /// ∫_{r0}^{r1} q dr, exact for the closed-form families and for the
    /// piecewise-linear interpolant of sampled tables.
    double integral_on(double r0, double r1) const;

    double domain_start() const;
    /// Largest radius the profile can be evaluated at (+inf except for
    /// sampled-backed profiles).
    double horizon() const;
    /// Interior kink locations (cutoffs, piece joints, table nodes) within
    /// (lo, hi), for quadrature splitting.
    std::vector<double> breakpoints(double lo, double hi) const;

    Family family() const;
    const std::string& description() const;

    /// Family parameters; DomainError when the family does not carry them.
    double param_c() const;
    double param_p() const;
    double param_cutoff() const;

    static double infinite_radius();

private:
    explicit RadialProfile(std::shared_ptr<const detail::ProfileImpl> impl);
    std::shared_ptr<const detail::ProfileImpl> impl_;
    friend struct detail::ProfileImpl;
    friend class TestFunction;
};

enum class Monotonicity { non_decreasing, non_increasing };

/// Positive monotone weight ψ(r) with derivative, entering the functional
/// ψq/(ψ²+q). Monotonicity is declared at construction and sample-verified.
class TestFunction {
public:
    enum class Family { constant, power, sqrt_profile, sampled };

    static TestFunction constant(double x);
    /// ψ(r) = k r^{-alpha} on r >= domain_start (> 0 unless alpha == 0).
    static TestFunction power(double k, double alpha, double domain_start = 1.0);
    /// ψ(r) = sqrt(q(r)); requires q > 0 on its domain. Monotonicity is
    /// inferred from samples and verified.
    static TestFunction sqrt_of_profile(const RadialProfile& q);
    /// Piecewise-linear table with matching derivative samples.
    static TestFunction sampled(std::vector<double> radii, std::vector<double> values,
                                std::vector<double> derivatives, double horizon,
                                Monotonicity declared);

    double value(double r) const;
    double operator()(double r) const { return value(r); }
    double derivative(double r) const;

    Monotonicity monotonicity() const;
    double domain_start() const;
    double horizon() const;
    /// inf_{r >= R} ψ(r); 0 when ψ decays to zero on the tail.
    double tail_infimum(double R) const;
    std::vector<double> breakpoints(double lo, double hi) const;

    Family family() const;
    const std::string& description() const;

private:
    explicit TestFunction(std::shared_ptr<const detail::TestFunctionImpl> impl);
    std::shared_ptr<const detail::TestFunctionImpl> impl_;
    friend struct detail::TestFunctionImpl;
};

}  // namespace myers
