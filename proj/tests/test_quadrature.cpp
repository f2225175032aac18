#include <doctest.h>

#include <cmath>

#include "myers/errors.hpp"
#include "myers/quadrature.hpp"

using namespace myers;

TEST_CASE("closed-form integrands") {
    auto one = integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, 1e-10);
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(one.error <= 1e-10);

    // [∫_0^pi sin = 2]
    auto s = integrate_adaptive([](double r) { return std::sin(r); }, 0.0, M_PI, 1e-12);
    CHECK(std::abs(s.value - 2.0) <= 1e-10);
    CHECK(s.error <= 1e-10);

    // [∫_0^1 1/(1+r^2) = pi/4]
    auto at = integrate_adaptive([](double r) { return 1.0 / (1.0 + r * r); }, 0.0, 1.0, 1e-12);
    CHECK(std::abs(at.value - M_PI / 4.0) <= 1e-10);
    CHECK(at.error <= 1e-10);
}

TEST_CASE("error estimate dominates true error on closed forms") {
    struct Case {
        double (*f)(double);
        double a, b, exact;
    };
    const Case cases[] = {
        {[](double r) { return std::exp(-r); }, 0.0, 10.0, 1.0 - std::exp(-10.0)},
        {[](double r) { return 1.0 / (r * r); }, 1.0, 100.0, 0.99},
        {[](double r) { return std::cos(3.0 * r); }, 0.0, 2.0, std::sin(6.0) / 3.0},
    };
    for (const auto& c : cases) {
        auto res = integrate_adaptive(c.f, c.a, c.b, 1e-11);
        CHECK(std::abs(res.value - c.exact) <= std::max(1e-11, res.error));
    }
}

TEST_CASE("breakpoints let kinks converge") {
    // |r - 1| has a kink; splitting there keeps panels smooth.
    auto f = [](double r) { return std::abs(r - 1.0); };
    auto res = integrate_adaptive(f, 0.0, 2.0, 1e-12, {1.0});
    CHECK(std::abs(res.value - 1.0) <= 1e-12);
}

TEST_CASE("quadrature failure carries the best estimate") {
    // An integrable singularity inside the interval defeats bisection at
    // this tolerance; the failure must still report a value.
    auto f = [](double r) { return 1.0 / std::sqrt(std::abs(r - 0.5) + 1e-300); };
    bool threw = false;
    try {
        integrate_adaptive(f, 0.0, 1.0, 1e-14);
    } catch (const QuadratureError& e) {
        threw = true;
        CHECK(e.best_value() > 0.0);
        CHECK(std::isfinite(e.best_value()));
    }
    CHECK(threw);
}

TEST_CASE("input validation") {
    auto f = [](double) { return 1.0; };
    CHECK_THROWS_AS(integrate_adaptive(f, 1.0, 0.0, 1e-10), DomainError);
    CHECK_THROWS_AS(integrate_adaptive(f, 0.0, 1.0, 0.0), DomainError);
    auto empty = integrate_adaptive(f, 1.0, 1.0, 1e-10);
    CHECK(empty.value == 0.0);
}
