#include "myers/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "myers/errors.hpp"
#include "myers/quadrature.hpp"

namespace myers {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> merged_breakpoints(const RadialProfile& q, const TestFunction& psi, double lo,
                                       double hi) {
    auto out = q.breakpoints(lo, hi);
    auto ps = psi.breakpoints(lo, hi);
    out.insert(out.end(), ps.begin(), ps.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void check_interval(const RadialProfile& q, const TestFunction& psi, double a, double b) {
    const double lo = std::max(q.domain_start(), psi.domain_start());
    if (!(a >= lo)) {
        throw DomainError("interval start " + std::to_string(a) + " below domain start");
    }
    if (!(b > a)) throw DomainError("functional requires b > a");
    if (std::isfinite(b) && (b > q.horizon() || b > psi.horizon())) {
        throw DomainError("interval end beyond profile horizon");
    }
}

// Truncation radius for b = inf: double from max(a, 1) until the dropped
// tail of the integrand, bounded by tail(q)/inf psi, is <= tol/10.
double find_truncation(const RadialProfile& q, const TestFunction& psi, double a, double tol,
                       double* tail_err) {
    double R = std::max(a, 1.0);
    for (int i = 0; i < 1200; ++i) {
        const double qt = q.tail_bound(R);
        const double pinf = psi.tail_infimum(R);
        if (std::isfinite(qt) && pinf > 0.0) {
            const double bound = qt / pinf;
            if (bound <= 0.1 * tol) {
                *tail_err = bound;
                return R;
            }
        } else if (!std::isfinite(qt) && q.tail_bound(2.0 * R) >= qt) {
            // Tail bound is not shrinking: give up early for clearly
            // divergent families instead of doubling 1200 times.
            break;
        }
        R *= 2.0;
        if (!std::isfinite(R)) break;
    }
    throw UnboundedDomainError("no finite truncation for improper integral: q tail " +
                               std::string(std::isfinite(q.tail_bound(std::max(a, 1.0)))
                                               ? "converges too slowly"
                                               : "diverges") +
                               " or psi is not bounded below on the tail");
}

}  // namespace

namespace detail {

double functional_integrand(const RadialProfile& q, const TestFunction& psi, double r) {
    const double qv = q.value(r);
    const double pv = psi.value(r);
    if (qv == 0.0) return 0.0;
    const double val = pv * qv / (pv * pv + qv);
    // Pointwise cap ψq/(ψ²+q) <= min(ψ, q/ψ); violation means a broken
    // profile or test function slipped through construction checks.
    const double cap = std::min(pv, qv / pv);
    if (!(val <= cap * (1.0 + 1e-12) + 1e-300)) {
        throw std::logic_error("functional integrand exceeded its cap at r = " + std::to_string(r));
    }
    return val;
}

}  // namespace detail

FunctionalValue eval_F(const RadialProfile& q, const TestFunction& psi, double a, double b,
                       double tol) {
    check_interval(q, psi, a, b);
    if (!(tol > 0.0)) throw DomainError("eval_F requires tol > 0");

    FunctionalValue out;
    double upper = b;
    double tail_err = 0.0;
    if (!std::isfinite(b)) {
        upper = find_truncation(q, psi, a, tol, &tail_err);
        out.truncated_at = upper;
    }

    const auto integrand = [&](double r) { return detail::functional_integrand(q, psi, r); };
    const auto quad =
        integrate_adaptive(integrand, a, upper, tol, merged_breakpoints(q, psi, a, upper));
    out.integral = quad.value;
    out.abs_error_estimate = quad.error + tail_err;

    if (psi.monotonicity() == Monotonicity::non_increasing) {
        // For b = inf the correction uses lim ψ, which equals the tail
        // infimum of a non-increasing function. Zero infimum was rejected
        // by the truncation search above.
        const double psi_b = std::isfinite(b) ? psi.value(b) : psi.tail_infimum(upper);
        out.correction = -0.25 * std::log(psi.value(a) / psi_b);
    }
    out.value = out.integral + out.correction;
    return out;
}

std::pair<double, double> eval_segment_criterion(const RadialProfile& q, const TestFunction& psi,
                                                 double l, double tol) {
    if (!(l > 0.0)) throw DomainError("segment criterion requires l > 0");
    check_interval(q, psi, 0.0, l);
    const auto integrand = [&](double r) { return detail::functional_integrand(q, psi, r); };
    const auto quad = integrate_adaptive(integrand, 0.0, l, tol, merged_breakpoints(q, psi, 0.0, l));
    const double rhs = 2.0 + 0.25 * std::abs(std::log(psi.value(l) / psi.value(0.0)));
    return {quad.value, rhs};
}

double mean_curvature_lower_bound(const FunctionalValue& F, const TestFunction& psi, double a) {
    if (F.value >= 1.0) return kInf;
    return psi.value(a) * F.value / (1.0 - F.value);
}

std::pair<double, double> calabi_bound(const RadialProfile& q, double a, double b, double tol) {
    if (!(a > 0.0 && b > a && std::isfinite(b))) {
        throw DomainError("calabi_bound requires 0 < a < b finite");
    }
    const auto quad = integrate_adaptive([&](double r) { return std::sqrt(q.value(r)); }, a, b,
                                         tol, q.breakpoints(a, b));
    const double lr = std::log(b / a);
    return {quad.value, std::sqrt(0.25 * lr * lr + lr)};
}

std::pair<double, double> ray_tail_check(const RadialProfile& q, double a, double tol) {
    if (!(a > 0.0)) throw DomainError("ray_tail_check requires a > 0");
    double R = std::max(a, 1.0);
    for (int i = 0; i < 1200 && std::isfinite(R); ++i) {
        const double qt = q.tail_bound(R);
        if (!std::isfinite(qt)) break;
        if (qt <= 0.1 * tol) {
            const auto quad =
                integrate_adaptive([&](double r) { return q.value(r); }, a, R, tol,
                                   q.breakpoints(a, R));
            return {quad.value, 1.0 / a};
        }
        R *= 2.0;
    }
    throw UnboundedDomainError("ray_tail_check: tail integral of " + q.description() +
                               " diverges");
}

}  // namespace myers
