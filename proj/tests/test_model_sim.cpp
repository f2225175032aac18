#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "myers/errors.hpp"
#include "myers/model_sim.hpp"

using namespace myers;

TEST_CASE("sphere model: v = sin r") {
    const auto traj = simulate_model(RadialProfile::constant(1.0), 4.0, 1e-12);
    REQUIRE(traj.zeta().has_value());
    REQUIRE(traj.rho().has_value());
    CHECK(*traj.zeta() == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
    CHECK(*traj.rho() == doctest::Approx(M_PI).epsilon(1e-9));
    CHECK(*traj.zeta() < *traj.rho());
    for (double r : {0.3, 1.0, 2.2, 3.0}) {
        CHECK(traj.v_at(r) == doctest::Approx(std::sin(r)).epsilon(1e-9));
        CHECK(traj.v_prime_at(r) == doctest::Approx(std::cos(r)).epsilon(1e-9));
    }
    CHECK(traj.v().front() == 0.0);
    CHECK(traj.v_prime().front() == 1.0);
}

TEST_CASE("flat model: v = r, no events") {
    const auto traj = simulate_model(RadialProfile::constant(0.0), 10.0, 1e-12);
    CHECK(!traj.zeta().has_value());
    CHECK(!traj.rho().has_value());
    CHECK(traj.v_at(7.0) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(traj.m_at(4.0) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(traj.max_riccati_residual() <= 1e-8);
}

TEST_CASE("stiff sphere: v = sin(2r)/2") {
    const auto traj = simulate_model(RadialProfile::constant(4.0), 2.0, 1e-12);
    REQUIRE(traj.rho().has_value());
    CHECK(*traj.rho() == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
    REQUIRE(traj.zeta().has_value());
    CHECK(*traj.zeta() == doctest::Approx(M_PI / 4.0).epsilon(1e-9));
    for (double r : {0.3, 0.7, 1.1}) {
        CHECK(traj.v_at(r) == doctest::Approx(0.5 * std::sin(2.0 * r)).epsilon(1e-9));
    }
}

TEST_CASE("riccati residual and blow-down on the stored grid") {
    const auto traj = simulate_model(RadialProfile::constant(1.0), 4.0, 1e-13);
    CHECK(traj.max_riccati_residual() <= 1e-6);

    // m is non-increasing across the grid wherever defined.
    const auto& m = traj.m();
    const auto& grid = traj.grid();
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!std::isfinite(m[i])) continue;
        if (grid[i] > 0.0 && grid[i] < *traj.rho()) {
            CHECK(m[i] <= prev + 1e-8);
            prev = m[i];
        }
    }

    // Refined grid reaches deep into the pole: m below -1e3 just before rho.
    double last_m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < *traj.rho() && std::isfinite(m[i])) last_m = m[i];
    }
    CHECK(last_m < -1e3);
}

TEST_CASE("sturm monotonicity of the conjugate radius") {
    const auto strong = simulate_model(RadialProfile::constant(4.0), 4.0, 1e-12);
    const auto weak = simulate_model(RadialProfile::constant(1.0), 4.0, 1e-12);
    REQUIRE(strong.rho().has_value());
    REQUIRE(weak.rho().has_value());
    CHECK(*strong.rho() <= *weak.rho());

    // Scaled pair: q_l(r) = l^2 q(l r) has rho(q_l) = rho(q)/l.
    const auto base = simulate_model(RadialProfile::exp_decay(25.0, 1.0), 4.0, 1e-12);
    const auto scaled = simulate_model(RadialProfile::exp_decay(100.0, 2.0), 2.0, 1e-12);
    REQUIRE(base.rho().has_value());
    REQUIRE(scaled.rho().has_value());
    CHECK(*scaled.rho() == doctest::Approx(*base.rho() / 2.0).epsilon(1e-8));
}

TEST_CASE("segment theorem on the sphere") {
    const auto traj = simulate_model(RadialProfile::constant(1.0), 4.0, 1e-12);
    {
        const auto check = verify_segment_theorem(traj, TestFunction::constant(1.0));
        CHECK(check.lhs == doctest::Approx(M_PI / 2.0).epsilon(1e-8));
        CHECK(check.rhs == doctest::Approx(2.0));
        CHECK(check.holds);
    }
    {
        // integrand 10/101, rho = pi.
        const auto check = verify_segment_theorem(traj, TestFunction::constant(10.0));
        CHECK(check.lhs == doctest::Approx(10.0 * M_PI / 101.0).epsilon(1e-8));
        CHECK(check.lhs == doctest::Approx(0.3110487775831478).epsilon(1e-8));
        CHECK(check.holds);
    }
    const auto q4 = simulate_model(RadialProfile::constant(4.0), 2.0, 1e-12);
    const auto check = verify_segment_theorem(q4, TestFunction::constant(2.0));
    CHECK(check.lhs == doctest::Approx(M_PI / 2.0).epsilon(1e-8));  // integrand 1, rho = pi/2
    CHECK(check.rhs == doctest::Approx(2.0));
    CHECK(check.holds);
}

TEST_CASE("segment theorem needs a conjugate radius") {
    const auto traj = simulate_model(RadialProfile::constant(0.0), 5.0, 1e-12);
    CHECK_THROWS_AS(verify_segment_theorem(traj, TestFunction::constant(1.0)),
                    PreconditionError);
}

TEST_CASE("squeeze solution closed forms") {
    auto q1 = RadialProfile::constant(1.0);
    {
        // psi = 1: phi' = 1/2, phi(b) = 1 => phi(r) = 1 - (b - r)/2.
        const auto sol = solve_squeeze(q1, TestFunction::constant(1.0), 0.0, M_PI / 2.0);
        CHECK(sol.boundary() == doctest::Approx(1.0));
        for (double r : {0.0, 0.5, 1.0, 1.5}) {
            CHECK(sol.phi_at(r) == doctest::Approx(1.0 - (M_PI / 2.0 - r) / 2.0).epsilon(1e-10));
        }
        CHECK(sol.max_residual() <= 1e-8);
    }
    {
        // Zero curvature: phi stays at 1/psi.
        const auto sol = solve_squeeze(RadialProfile::constant(0.0), TestFunction::constant(2.0),
                                       0.0, 1.0);
        CHECK(sol.phi_at(0.3) == doctest::Approx(0.5).epsilon(1e-12));
    }
    {
        // q = 4, psi = 2: phi' = 4/8 = 1/2, phi(1) = 1/2.
        const auto sol = solve_squeeze(RadialProfile::constant(4.0), TestFunction::constant(2.0),
                                       0.0, 1.0);
        CHECK(sol.phi_at(0.0) == doctest::Approx(0.5 - 0.5).epsilon(1e-10));
        CHECK(sol.phi_at(0.6) == doctest::Approx(0.5 - 0.4 * 0.5).epsilon(1e-10));
        CHECK(sol.max_residual() <= 1e-8);
    }
}

TEST_CASE("sandwich bounds hold on [0.1, zeta]") {
    const auto traj = simulate_model(RadialProfile::constant(1.0), 4.0, 1e-12);
    const auto sol = solve_squeeze(RadialProfile::constant(1.0), TestFunction::constant(1.0), 0.1,
                                   M_PI / 2.0);
    const auto [lower, upper] = verify_sandwich(sol, traj);
    CHECK(lower <= 1e-6);
    CHECK(upper <= 1e-6);
    // Spot value at pi/4: 1/(1+cot(pi/4)) = 0.5 <= phi = 1 - pi/8 <= 1.
    CHECK(sol.phi_at(M_PI / 4.0) == doctest::Approx(1.0 - M_PI / 8.0).epsilon(1e-10));
}

TEST_CASE("sandwich interval must stay mean-convex") {
    const auto traj = simulate_model(RadialProfile::constant(1.0), 4.0, 1e-12);
    const auto sol = solve_squeeze(RadialProfile::constant(1.0), TestFunction::constant(1.0), 0.1,
                                   2.5);  // past zeta = pi/2
    CHECK_THROWS_AS(verify_sandwich(sol, traj), PreconditionError);
}

TEST_CASE("squeeze horizon sequence decreases pointwise") {
    auto q = RadialProfile::constant(1.0);
    auto psi = TestFunction::constant(1.0);
    const double bs[] = {0.8, 1.0, 1.2, 1.5};
    double prev[5] = {1e9, 1e9, 1e9, 1e9, 1e9};
    const double probes[5] = {0.1, 0.25, 0.4, 0.55, 0.7};
    for (double b : bs) {
        const auto sol = solve_squeeze(q, psi, 0.0, b);
        for (int i = 0; i < 5; ++i) {
            const double cur = sol.phi_at(probes[i]);
            CHECK(cur <= prev[i] + 1e-9);
            prev[i] = cur;
        }
    }
}

TEST_CASE("second variation: extremal equality and bumps") {
    const auto traj = simulate_model(RadialProfile::constant(1.0), 3.2, 1e-12);
    {
        // u = sin on [0, pi]: both sides equal pi/2.
        const auto check = second_variation_check(traj, BumpKind::sine, 0.0, M_PI);
        CHECK(check.lhs == doctest::Approx(M_PI / 2.0).epsilon(1e-8));
        CHECK(check.rhs == doctest::Approx(M_PI / 2.0).epsilon(1e-8));
    }
    {
        // Flat model, u = sin(pi r) on [0,1]: lhs = 0 <= rhs = pi^2/2.
        const auto flat = simulate_model(RadialProfile::constant(0.0), 2.0, 1e-12);
        const auto check = second_variation_check(flat, BumpKind::sine, 0.0, 1.0);
        CHECK(check.lhs == 0.0);
        CHECK(check.rhs == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-9));
    }
    {
        // The documented counterexample: u = 1 on [1, 2] violates the
        // inequality (rhs = cot 2 - cot 1 < 0 < lhs = 1), which is why the
        // sanctioned family vanishes at the endpoints.
        const auto check = second_variation_check(traj, BumpKind::constant, 1.0, 2.0);
        CHECK(check.lhs == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(check.rhs ==
              doctest::Approx(1.0 / std::tan(2.0) - 1.0 / std::tan(1.0)).epsilon(1e-8));
        CHECK(check.lhs > check.rhs);
    }
    CHECK_THROWS_AS(second_variation_check(traj, BumpKind::constant, 0.0, 1.0),
                    PreconditionError);
    CHECK_THROWS_AS(second_variation_check(traj, BumpKind::sine, 0.0, 3.2 + 0.5),
                    PreconditionError);
}

TEST_CASE("ray criterion on conjugate-free models") {
    {
        const auto check =
            verify_ray_criterion_on_model(RadialProfile::constant(0.0), TestFunction::constant(1.0),
                                          0.0, 100.0, 1e-10, 200.0);
        CHECK(check.F == 0.0);
        CHECK(check.holds);
    }
    {
        // Sub-threshold poly decay, psi constant, conjugate-free to 1e4.
        const auto check = verify_ray_criterion_on_model(
            RadialProfile::poly_decay(0.1, 3.0, 1.0), TestFunction::constant(0.3), 1.0,
            std::numeric_limits<double>::infinity());
        CHECK(check.F < 1.0);
        CHECK(check.holds);
    }
    // A sphere has a conjugate point: the theorem does not apply.
    CHECK_THROWS_AS(
        verify_ray_criterion_on_model(RadialProfile::constant(1.0), TestFunction::constant(1.0),
                                      0.0, 10.0, 1e-10, 20.0),
        PreconditionError);
}

TEST_CASE("csv export shape") {
    const auto traj = simulate_model(RadialProfile::constant(0.0), 1.0, 1e-10);
    std::ostringstream os;
    traj.write_csv(os);
    const std::string csv = os.str();
    CHECK(csv.rfind("r,v,v_prime,m\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(traj.grid().size()) + 1);
}
