#include <doctest.h>

#include <cmath>
#include <random>

#include "myers/errors.hpp"
#include "myers/profiles.hpp"

using namespace myers;

TEST_CASE("eval_q per family") {
    CHECK(RadialProfile::constant(1.0).value(2.0) == doctest::Approx(1.0));
    CHECK(RadialProfile::poly_decay(1.0, 2.0, 1.0).value(2.0) == doctest::Approx(0.25));
    CHECK(RadialProfile::exp_decay(1.0, 1.0).value(std::log(2.0)) == doctest::Approx(0.5));
    // Below the cutoff the poly profile is flat.
    CHECK(RadialProfile::poly_decay(3.0, 2.0, 1.0).value(0.0) == doctest::Approx(3.0));
    CHECK(RadialProfile::poly_decay(3.0, 2.0, 1.0).value(0.5) == doctest::Approx(3.0));
}

TEST_CASE("domain errors") {
    auto table = RadialProfile::sampled({1.0, 2.0, 3.0}, {1.0, 0.5, 0.25}, 5.0);
    CHECK_THROWS_AS(table.value(0.5), DomainError);
    CHECK_THROWS_AS(table.value(6.0), DomainError);
    CHECK(table.value(5.0) == doctest::Approx(0.25));   // constant extension
    CHECK(table.value(2.5) == doctest::Approx(0.375));  // linear interpolation
    CHECK_THROWS_AS(RadialProfile::constant(-1.0), DomainError);
    CHECK_THROWS_AS(RadialProfile::poly_decay(1.0, 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(RadialProfile::sampled({1.0, 1.0}, {1.0, 1.0}, 2.0), DomainError);
    CHECK_THROWS_AS(RadialProfile::sampled({1.0, 2.0}, {1.0, -0.1}, 2.0), DomainError);
}

TEST_CASE("tail_integral_bound closed forms") {
    // [∫_1^inf r^-2 dr = 1]
    CHECK(RadialProfile::poly_decay(1.0, 2.0, 1.0).tail_bound(1.0) == doctest::Approx(1.0));
    // [∫_0^inf e^-r dr = 1]
    CHECK(RadialProfile::exp_decay(1.0, 1.0).tail_bound(0.0) == doctest::Approx(1.0));
    CHECK(std::isinf(RadialProfile::constant(1.0).tail_bound(0.0)));
    CHECK(RadialProfile::constant(0.0).tail_bound(0.0) == 0.0);
    CHECK(std::isinf(RadialProfile::poly_decay(1.0, 1.0, 1.0).tail_bound(1.0)));
    CHECK(std::isinf(RadialProfile::sampled({0.0, 1.0}, {1.0, 1.0}, 2.0).tail_bound(0.0)));
    // Below the cutoff the flat part is included.
    CHECK(RadialProfile::poly_decay(1.0, 2.0, 1.0).tail_bound(0.0) == doctest::Approx(2.0));
}

TEST_CASE("tail bound dominates numerical integrals") {
    const RadialProfile profiles[] = {
        RadialProfile::poly_decay(1.0, 2.0, 1.0),
        RadialProfile::poly_decay(0.25, 3.0, 0.5),
        RadialProfile::exp_decay(2.0, 1.5),
    };
    for (const auto& q : profiles) {
        for (int i = 0; i < 10; ++i) {
            const double R = 0.5 + 1.7 * i;
            // Midpoint Riemann sum over [R, R+100] as an independent stand-in
            // for the tail integral.
            double sum = 0.0;
            const int n = 20000;
            for (int k = 0; k < n; ++k) {
                sum += q.value(R + 100.0 * (k + 0.5) / n) * (100.0 / n);
            }
            CHECK(q.tail_bound(R) >= sum * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("integral_on is exact") {
    auto q = RadialProfile::poly_decay(2.0, 2.0, 1.0);
    // Flat part 2*(1-0.5) plus ∫_1^4 2 r^-2 = 2*(1 - 1/4).
    CHECK(q.integral_on(0.5, 4.0) == doctest::Approx(1.0 + 1.5).epsilon(1e-14));
    auto e = RadialProfile::exp_decay(1.0, 2.0);
    CHECK(e.integral_on(0.0, 1.0) == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0));
    auto s = RadialProfile::sampled({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, 3.0);
    CHECK(s.integral_on(0.0, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("piecewise delegates and integrates") {
    auto q = RadialProfile::piecewise({
        {0.0, RadialProfile::constant(1.0)},
        {1.0, RadialProfile::poly_decay(1.0, 2.0, 1.0)},
    });
    CHECK(q.value(0.5) == doctest::Approx(1.0));
    CHECK(q.value(2.0) == doctest::Approx(0.25));
    CHECK(q.tail_bound(0.0) == doctest::Approx(1.0 + 1.0));
    CHECK(q.integral_on(0.0, 2.0) == doctest::Approx(1.0 + 0.5));
    auto bps = q.breakpoints(0.0, 10.0);
    CHECK(bps.size() == 1);
    CHECK(bps[0] == doctest::Approx(1.0));
}

TEST_CASE("eval_psi and eval_psi_prime per family") {
    CHECK(TestFunction::constant(2.0).value(5.0) == doctest::Approx(2.0));
    CHECK(TestFunction::power(1.0, 1.0).value(4.0) == doctest::Approx(0.25));
    // [sqrt(4/2^2) = 1]
    auto psi = TestFunction::sqrt_of_profile(RadialProfile::poly_decay(4.0, 2.0, 1.0));
    CHECK(psi.value(2.0) == doctest::Approx(1.0));
    CHECK(psi.monotonicity() == Monotonicity::non_increasing);
    CHECK(TestFunction::constant(2.0).derivative(5.0) == 0.0);
    CHECK(TestFunction::power(1.0, 1.0).derivative(2.0) == doctest::Approx(-0.25));
}

TEST_CASE("psi positivity and monotonicity are enforced") {
    CHECK_THROWS_AS(TestFunction::constant(0.0), PositivityError);
    CHECK_THROWS_AS(TestFunction::sqrt_of_profile(RadialProfile::constant(0.0)), PositivityError);
    // A hump is neither non-decreasing nor non-increasing.
    auto hump = RadialProfile::sampled({0.0, 1.0, 2.0}, {1.0, 4.0, 1.0}, 3.0);
    CHECK_THROWS_AS(TestFunction::sqrt_of_profile(hump), MonotonicityError);
    CHECK_THROWS_AS(TestFunction::sampled({0.0, 1.0}, {1.0, 2.0}, {1.0, 1.0}, 2.0,
                                          Monotonicity::non_increasing),
                    MonotonicityError);
}

TEST_CASE("random radii keep q >= 0 and psi > 0") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> radius(0.0, 50.0);
    const RadialProfile qs[] = {
        RadialProfile::constant(0.7),
        RadialProfile::poly_decay(2.0, 3.0, 0.5),
        RadialProfile::exp_decay(1.3, 0.8),
    };
    const TestFunction psis[] = {
        TestFunction::constant(0.4),
        TestFunction::power(2.0, 1.5, 0.1),
        TestFunction::sqrt_of_profile(RadialProfile::exp_decay(1.0, 1.0)),
    };
    for (int i = 0; i < 1000; ++i) {
        const double r = radius(rng);
        for (const auto& q : qs) CHECK(q.value(r) >= 0.0);
        for (const auto& psi : psis) {
            if (r >= psi.domain_start()) CHECK(psi.value(r) > 0.0);
        }
    }
}

TEST_CASE("psi derivative matches central differences") {
    const TestFunction psis[] = {
        TestFunction::power(2.0, 1.5, 0.1),
        TestFunction::power(0.5, -0.75, 0.1),
        TestFunction::sqrt_of_profile(RadialProfile::exp_decay(2.0, 0.5)),
        TestFunction::sqrt_of_profile(RadialProfile::poly_decay(4.0, 2.0, 1.0)),
    };
    const double h = 1e-5;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> radius(1.5, 40.0);  // away from cutoffs
    for (const auto& psi : psis) {
        for (int i = 0; i < 200; ++i) {
            const double r = radius(rng);
            const double fd = (psi.value(r + h) - psi.value(r - h)) / (2.0 * h);
            const double an = psi.derivative(r);
            CHECK(std::abs(an - fd) <= 1e-6 * (1.0 + std::abs(an)));
        }
    }
}

TEST_CASE("tail_infimum") {
    CHECK(TestFunction::constant(2.0).tail_infimum(5.0) == doctest::Approx(2.0));
    CHECK(TestFunction::power(1.0, 1.0).tail_infimum(5.0) == 0.0);
    CHECK(TestFunction::power(1.0, -1.0, 0.5).tail_infimum(5.0) == doctest::Approx(5.0));
    CHECK(TestFunction::sqrt_of_profile(RadialProfile::constant(4.0)).tail_infimum(1.0) ==
          doctest::Approx(2.0));
}
