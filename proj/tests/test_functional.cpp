#include <doctest.h>

#include <cmath>
#include <random>

#include "myers/errors.hpp"
#include "myers/functional.hpp"
#include "myers/quadrature.hpp"

using namespace myers;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("eval_F on the p=2 special family") {
    // q = c/r^2, psi = x/r: the integrand is x c /((x^2+c) r) exactly, so
    //   F = (x c/(x^2+c) - 1/4) log(b/a)   (independent oracle by algebra).
    auto oracle = [](double c, double x, double a, double b) {
        return (x * c / (x * x + c) - 0.25) * std::log(b / a);
    };
    {
        const auto F = eval_F(RadialProfile::poly_decay(1.0, 2.0, 1.0),
                              TestFunction::power(1.0, 1.0), 1.0, std::exp(2.0));
        CHECK(F.value == doctest::Approx(oracle(1.0, 1.0, 1.0, std::exp(2.0))).epsilon(1e-10));
        CHECK(F.value == doctest::Approx(0.5).epsilon(1e-10));  // (1/2 - 1/4) * 2
        CHECK(F.correction == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(F.value == F.integral + F.correction);
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> cs(0.2, 9.0), xs(0.3, 3.0), bs(2.0, 50.0);
    for (int i = 0; i < 20; ++i) {
        const double c = cs(rng), x = xs(rng), b = bs(rng);
        const auto F = eval_F(RadialProfile::poly_decay(c, 2.0, 1.0),
                              TestFunction::power(x, 1.0), 1.0, b, 1e-11);
        CHECK(F.value == doctest::Approx(oracle(c, x, 1.0, b)).epsilon(1e-9));
    }
}

TEST_CASE("eval_F trivial and exponential cases") {
    // Zero curvature: the functional vanishes for any psi.
    const auto zero = eval_F(RadialProfile::constant(0.0), TestFunction::constant(1.0), 0.0, 10.0);
    CHECK(zero.value == 0.0);
    CHECK(zero.integral == 0.0);

    // [∫_0^inf e^-r/(1+e^-r) dr = log 2]
    const auto F =
        eval_F(RadialProfile::exp_decay(1.0, 1.0), TestFunction::constant(1.0), 0.0, kInf);
    CHECK(F.value == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(F.truncated_at.has_value());
    CHECK(F.correction == 0.0);
    CHECK(F.abs_error_estimate >= 0.0);
}

TEST_CASE("eval_F rejects intervals past a sampled horizon") {
    auto table = RadialProfile::sampled({0.0, 1.0, 2.0}, {1.0, 0.5, 0.25}, 5.0);
    auto psi = TestFunction::constant(1.0);
    CHECK_NOTHROW(eval_F(table, psi, 0.0, 5.0));
    CHECK_THROWS_AS(eval_F(table, psi, 0.0, 6.0), DomainError);
    CHECK_THROWS_AS(eval_F(table, psi, 0.0, std::numeric_limits<double>::infinity()),
                    UnboundedDomainError);
}

TEST_CASE("eval_F rejects hopeless improper intervals") {
    // Positive constant curvature has a divergent tail.
    CHECK_THROWS_AS(
        eval_F(RadialProfile::constant(1.0), TestFunction::constant(1.0), 0.0, kInf),
        UnboundedDomainError);
    // Decaying psi with zero tail infimum cannot certify the truncation.
    CHECK_THROWS_AS(eval_F(RadialProfile::poly_decay(1.0, 2.0, 1.0),
                           TestFunction::power(1.0, 1.0), 1.0, kInf),
                    UnboundedDomainError);
}

TEST_CASE("eval_segment_criterion") {
    auto one = RadialProfile::constant(1.0);
    auto psi = TestFunction::constant(1.0);
    {
        const auto [lhs, rhs] = eval_segment_criterion(one, psi, 4.0);
        CHECK(lhs == doctest::Approx(2.0).epsilon(1e-12));  // l/2
        CHECK(rhs == doctest::Approx(2.0));
    }
    {
        const auto [lhs, rhs] = eval_segment_criterion(one, psi, M_PI);
        CHECK(lhs == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
        CHECK(rhs == doctest::Approx(2.0));
    }
    {
        const auto [lhs, rhs] = eval_segment_criterion(RadialProfile::constant(0.0), psi, 100.0);
        CHECK(lhs == 0.0);
        CHECK(rhs == doctest::Approx(2.0));
    }
}

TEST_CASE("mean_curvature_lower_bound") {
    auto psi = TestFunction::constant(1.0);
    FunctionalValue F;
    F.value = 0.5;
    CHECK(mean_curvature_lower_bound(F, psi, 1.0) == doctest::Approx(1.0));
    F.value = 0.0;
    CHECK(mean_curvature_lower_bound(F, psi, 1.0) == 0.0);
    F.value = 1.0;
    CHECK(std::isinf(mean_curvature_lower_bound(F, psi, 1.0)));
}

TEST_CASE("calabi_bound") {
    {
        const auto [lhs, rhs] = calabi_bound(RadialProfile::constant(0.0), 1.0, M_E);
        CHECK(lhs == 0.0);
        CHECK(rhs == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
    }
    {
        // sqrt(q) = 1/(2r): ∫_1^{e^2} = log(b/a)/2 = 1.
        const auto [lhs, rhs] =
            calabi_bound(RadialProfile::poly_decay(0.25, 2.0, 1.0), 1.0, std::exp(2.0));
        CHECK(lhs == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rhs == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    }
    {
        const auto [lhs, rhs] = calabi_bound(RadialProfile::constant(1.0), 1.0, 1.1);
        CHECK(lhs == doctest::Approx(0.1).epsilon(1e-12));
        const double lr = std::log(1.1);
        CHECK(rhs == doctest::Approx(std::sqrt(0.25 * lr * lr + lr)).epsilon(1e-14));
        CHECK(rhs == doctest::Approx(0.3123798767493003).epsilon(1e-12));
    }
    CHECK_THROWS_AS(calabi_bound(RadialProfile::constant(1.0), 0.0, 1.0), DomainError);
}

TEST_CASE("ray_tail_check") {
    {
        const auto [lhs, rhs] = ray_tail_check(RadialProfile::poly_decay(0.25, 2.0, 1.0), 1.0);
        CHECK(lhs == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(rhs == doctest::Approx(1.0));
    }
    {
        const auto [lhs, rhs] = ray_tail_check(RadialProfile::constant(0.0), 2.0);
        CHECK(lhs == 0.0);
        CHECK(rhs == doctest::Approx(0.5));
    }
    {
        const auto [lhs, rhs] = ray_tail_check(RadialProfile::exp_decay(1.0, 1.0), 1.0);
        CHECK(lhs == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
        CHECK(rhs == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(ray_tail_check(RadialProfile::constant(1.0), 1.0), UnboundedDomainError);
}

TEST_CASE("integrand cap holds pointwise") {
    auto q = RadialProfile::poly_decay(2.0, 2.5, 0.7);
    auto psi = TestFunction::power(1.3, 0.8, 0.2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> radius(0.2, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const double r = radius(rng);
        const double val = detail::functional_integrand(q, psi, r);
        CHECK(val <= std::min(psi.value(r), q.value(r) / psi.value(r)) * (1.0 + 1e-12) + 1e-300);
        CHECK(val >= 0.0);
    }
}

TEST_CASE("monotonicity of F in q") {
    struct Pair {
        RadialProfile lo, hi;
    };
    const Pair pairs[] = {
        {RadialProfile::poly_decay(1.0, 2.0, 1.0), RadialProfile::poly_decay(1.5, 2.0, 1.0)},
        {RadialProfile::constant(0.5), RadialProfile::constant(0.7)},
        {RadialProfile::exp_decay(1.0, 2.0), RadialProfile::exp_decay(1.0, 1.0)},
    };
    auto psi = TestFunction::constant(0.8);
    for (const auto& pr : pairs) {
        // Pointwise dominance first, on a grid.
        for (int i = 0; i <= 100; ++i) {
            const double r = 0.1 + 0.2 * i;
            REQUIRE(pr.lo.value(r) <= pr.hi.value(r) + 1e-15);
        }
        const auto Flo = eval_F(pr.lo, psi, 0.5, 20.0);
        const auto Fhi = eval_F(pr.hi, psi, 0.5, 20.0);
        CHECK(Flo.integral <=
              Fhi.integral + 2.0 * (Flo.abs_error_estimate + Fhi.abs_error_estimate));
    }
}

TEST_CASE("scaling invariance of F") {
    // q_l(r) = l^2 q(l r), psi_l(r) = l psi(l r) leave the functional
    // invariant under r -> l r. Closed under the families:
    //   poly(c,p,a0) -> poly(l^{2-p} c, p, a0/l), exp(c,p) -> exp(l^2 c, l p),
    //   power(k,alpha) -> power(l^{1-alpha} k, alpha).
    const double tol = 1e-11;
    for (double lambda : {0.5, 2.0, 10.0}) {
        {
            const double c = 1.3, p = 2.5, a0 = 0.5, k = 0.9, alpha = 0.8;
            const auto base = eval_F(RadialProfile::poly_decay(c, p, a0),
                                     TestFunction::power(k, alpha, 0.1), 1.0, 40.0, tol);
            const auto scaled =
                eval_F(RadialProfile::poly_decay(std::pow(lambda, 2.0 - p) * c, p, a0 / lambda),
                       TestFunction::power(std::pow(lambda, 1.0 - alpha) * k, alpha, 0.1 / lambda),
                       1.0 / lambda, 40.0 / lambda, tol);
            CHECK(scaled.value == doctest::Approx(base.value).epsilon(1e-9));
        }
        {
            const double c = 2.0, p = 1.0, x = 1.1;
            const auto base =
                eval_F(RadialProfile::exp_decay(c, p), TestFunction::constant(x), 0.5, 8.0, tol);
            const auto scaled =
                eval_F(RadialProfile::exp_decay(lambda * lambda * c, lambda * p),
                       TestFunction::constant(lambda * x), 0.5 / lambda, 8.0 / lambda, tol);
            CHECK(scaled.value == doctest::Approx(base.value).epsilon(1e-9));
        }
    }
}

TEST_CASE("additivity of F over split intervals") {
    const double tol = 1e-11;
    auto q = RadialProfile::exp_decay(2.0, 0.7);
    auto psi = TestFunction::power(1.5, 0.5, 0.1);
    const double a = 0.5, c = 3.0, b = 12.0;
    const auto whole = eval_F(q, psi, a, b, tol);
    const auto left = eval_F(q, psi, a, c, tol);
    const auto right = eval_F(q, psi, c, b, tol);
    CHECK(std::abs(left.value + right.value - whole.value) <= 10.0 * tol);
    CHECK(std::abs(left.correction + right.correction - whole.correction) <= 1e-14);
}
