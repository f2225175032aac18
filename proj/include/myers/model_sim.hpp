#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "myers/ode.hpp"
#include "myers/profiles.hpp"

namespace myers {

/// Scalar comparison model: v'' + q v = 0, v(0) = 0, v'(0) = 1 (equality
/// case of the traced Riccati inequality), with m = v'/v, the mean-convex
/// radius zeta (first zero of m) and the conjugate radius rho (first zero
/// of v after 0).
class ModelTrajectory {
public:
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& v() const { return v_; }
    const std::vector<double>& v_prime() const { return vp_; }
    /// m = v'/v at grid points; NaN where v <= 0.
    const std::vector<double>& m() const { return m_; }

    std::optional<double> zeta() const { return zeta_; }
    std::optional<double> rho() const { return rho_; }
    const RadialProfile& q_ref() const { return q_; }
    double r_max() const { return r_max_; }

    double v_at(double r) const;
    double v_prime_at(double r) const;
    /// v'/v from the dense solution (+inf at r = 0).
    double m_at(double r) const;

    /// Largest |FD(m) + m_i m_{i+1} + q(mid)| over adjacent grid pairs whose
    /// m values are finite and within |m| <= m_cap (the window where the
    /// check is numerically meaningful; near the poles of m the cancelling
    /// terms grow without bound).
    double max_riccati_residual(double m_cap = 5.0) const;

    /// CSV export with columns r,v,v_prime,m.
    void write_csv(std::ostream& os) const;

private:
    friend ModelTrajectory simulate_model(const RadialProfile&, double, double);
    explicit ModelTrajectory(RadialProfile q) : q_(std::move(q)) {}

    RadialProfile q_;
    double r_max_ = 0.0;
    std::vector<double> grid_, v_, vp_, m_;
    std::optional<double> zeta_, rho_;
    std::shared_ptr<const DenseOutput<2>> dense_;
};

/// Integrate the model over [0, r_max] with local tolerance tol and locate
/// zeta and rho by bracketing on the dense output (bisection to 1e-12
/// relative).
ModelTrajectory simulate_model(const RadialProfile& q, double r_max, double tol = 1e-12);

struct SegmentCheck {
    double lhs = 0.0;   // ∫_0^rho ψq/(ψ²+q) dr
    double rhs = 0.0;   // 2 + ¼|log(ψ(rho)/ψ(0))|
    bool holds = false; // lhs < rhs
};

/// Segment theorem at the simulated conjugate radius. Requires finite rho.
SegmentCheck verify_segment_theorem(const ModelTrajectory& traj, const TestFunction& psi,
                                    double tol = 1e-10);

/// Solution of phi' + psi' phi^2 - q/(psi^2+q) = 0 on [a, b], integrated
/// right-to-left from phi(b) = 1/psi(b) (the squeeze lemma construction).
class SqueezeSolution {
public:
    double a() const { return a_; }
    double b() const { return b_; }
    double boundary() const { return boundary_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& phi() const { return phi_; }
    const RadialProfile& q_ref() const { return q_; }
    const TestFunction& psi_ref() const { return psi_; }

    double phi_at(double r) const;

    /// Largest |FD(phi) + psi' phi^2 - q/(psi^2+q)| at midpoints of the
    /// dense output, five-point finite differences with step h.
    double max_residual(double h = 3e-4) const;

private:
    friend SqueezeSolution solve_squeeze(const RadialProfile&, const TestFunction&, double,
                                         double, double);
    SqueezeSolution(RadialProfile q, TestFunction psi) : q_(std::move(q)), psi_(std::move(psi)) {}

    RadialProfile q_;
    TestFunction psi_;
    double a_ = 0.0, b_ = 0.0, boundary_ = 0.0;
    std::vector<double> grid_, phi_;
    std::shared_ptr<const DenseOutput<1>> dense_;  // in s = b - r
};

SqueezeSolution solve_squeeze(const RadialProfile& q, const TestFunction& psi, double a, double b,
                              double tol = 1e-12);

/// Largest violations of the sandwich 1/(ψ+m) <= φ <= 1/ψ over the shared
/// interval: returns (max lower violation, max upper violation), both >= 0.
std::pair<double, double> verify_sandwich(const SqueezeSolution& sol, const ModelTrajectory& traj);

enum class BumpKind { sine, poly, constant };

struct SecondVariationCheck {
    double lhs = 0.0;  // ∫ u² q
    double rhs = 0.0;  // u²(b)m(b) - u²(a)m(a) + ∫ u'²
};

/// Second-variation inequality on [a, b] ⊂ [0, rho] for the given bump
/// family. The sine and poly bumps vanish at both endpoints (boundary terms
/// drop); the constant bump is the documented interior counterexample and
/// requires a > 0.
SecondVariationCheck second_variation_check(const ModelTrajectory& traj, BumpKind kind, double a,
                                            double b, double tol = 1e-10);

struct RayCriterionCheck {
    double F = 0.0;
    double bound = 1.0;
    bool holds = false;  // F <= 1 + 10 tol
};

/// Ray criterion F(q, ψ, a, b) <= 1 on a model confirmed conjugate-point
/// free up to `horizon`. Throws PreconditionError when the model has a
/// conjugate point.
RayCriterionCheck verify_ray_criterion_on_model(const RadialProfile& q, const TestFunction& psi,
                                                double a, double b, double tol = 1e-10,
                                                double horizon = 1e4);

}  // namespace myers
