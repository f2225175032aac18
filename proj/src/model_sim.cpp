#include "myers/model_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "myers/errors.hpp"
#include "myers/functional.hpp"
#include "myers/quadrature.hpp"

namespace myers {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Radii closer than this to a zero of v are excluded from the stored grid
// (m is a pole there); the last kept point sees |m| ~ 1/kZeroExclusion.
constexpr double kZeroExclusion = 2e-4;

std::vector<double> segment_edges(const RadialProfile& q, double lo, double hi) {
    std::vector<double> edges = q.breakpoints(lo, hi);
    edges.insert(edges.begin(), lo);
    edges.push_back(hi);
    return edges;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModelTrajectory

double ModelTrajectory::v_at(double r) const { return dense_->eval(r, 0); }
double ModelTrajectory::v_prime_at(double r) const { return dense_->eval(r, 1); }

double ModelTrajectory::m_at(double r) const {
    if (r == 0.0) return kInf;
    const double v = v_at(r);
    if (v == 0.0) return kInf;
    return v_prime_at(r) / v;
}

double ModelTrajectory::max_riccati_residual(double m_cap) const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double m1 = m_[i], m2 = m_[i + 1];
        if (!std::isfinite(m1) || !std::isfinite(m2)) continue;
        if (std::abs(m1) > m_cap || std::abs(m2) > m_cap) continue;
        const double dr = grid_[i + 1] - grid_[i];
        if (dr <= 0.0) continue;
        const double mid = 0.5 * (grid_[i] + grid_[i + 1]);
        // (m2-m1)/dr + m1*m2 estimates m' + m^2 at the midpoint; the product
        // form is exact for the Moebius profiles m has near its poles.
        const double res = (m2 - m1) / dr + m1 * m2 + q_.value(mid);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

void ModelTrajectory::write_csv(std::ostream& os) const {
    os << "r,v,v_prime,m\n";
    char buf[128];
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", grid_[i], v_[i], vp_[i],
                      m_[i]);
        os << buf;
    }
}

// ---------------------------------------------------------------------------
// simulate_model

ModelTrajectory simulate_model(const RadialProfile& q, double r_max, double tol) {
    if (!(r_max > 0.0) || !std::isfinite(r_max)) {
        throw DomainError("simulate_model requires finite r_max > 0");
    }
    if (q.domain_start() > 0.0) {
        throw DomainError("simulate_model needs q defined from r = 0");
    }
    if (r_max > q.horizon()) {
        throw DomainError("simulate_model: r_max beyond profile horizon");
    }
    if (!(tol > 0.0)) throw DomainError("simulate_model requires tol > 0");

    ModelTrajectory traj(q);
    traj.r_max_ = r_max;

    const auto rhs = [&q](double r, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = y[1];
        dy[1] = -q.value(r) * y[0];
    };

    // Integrate segment-wise between the kinks of q so every RK step sees a
    // smooth right-hand side.
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol;
    auto dense = std::make_shared<DenseOutput<2>>();
    std::array<double, 2> y = {0.0, 1.0};
    const auto edges = segment_edges(q, 0.0, r_max);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto part = integrate_dopri5<2>(rhs, y, edges[i], edges[i + 1], opt);
        y = part.steps().back().y1;
        for (const auto& s : part.steps()) dense->push(s);
    }
    traj.dense_ = dense;

    // Zeros of v (poles of m). The first one past 0 is rho.
    std::vector<double> zeros = {0.0};
    for (const auto& s : dense->steps()) {
        const bool skip_origin = s.t0 == 0.0;  // v(0) = 0 is not a conjugate point
        if (!skip_origin && s.y0[0] == 0.0) continue;  // counted at previous step end
        if (s.y0[0] * s.y1[0] < 0.0 || (!skip_origin && s.y1[0] == 0.0)) {
            zeros.push_back(bisect_dense_root(*dense, 0, s.t0, s.t1));
        }
    }
    if (zeros.size() > 1) traj.rho_ = zeros[1];

    // First zero of v' while v > 0 is zeta (m and v' share sign while v > 0).
    const double rho_limit = traj.rho_ ? *traj.rho_ : kInf;
    for (const auto& s : dense->steps()) {
        if (s.t0 >= rho_limit) break;
        if (s.y0[1] * s.y1[1] < 0.0 || s.y1[1] == 0.0) {
            const double z = bisect_dense_root(*dense, 1, s.t0, s.t1);
            if (z < rho_limit) traj.zeta_ = z;
            break;
        }
    }

    // Output grid: spacing fine enough for the finite-difference Riccati
    // residual where |m| is moderate, geometric approach into the poles of
    // m, points within kZeroExclusion of a zero of v dropped.
    const double h_base = std::max(0.01, r_max / 2048.0);
    const auto nearest_zero_dist = [&zeros](double r) {
        double d = kInf;
        for (double z : zeros) d = std::min(d, std::abs(r - z));
        return d;
    };
    const auto spacing = [&](double r) {
        const double d = nearest_zero_dist(r);
        const double v = dense->eval(r, 0);
        const double m = v != 0.0 ? dense->eval(r, 1) / v : kInf;
        if (std::isfinite(m) && std::abs(m) <= 7.0) {
            const double qv = q.value(r);
            const double curvature_scale = std::max(qv * (m * m + qv), 1e-12);
            return std::clamp(std::sqrt(9e-7 / curvature_scale), 3e-6, h_base);
        }
        return std::clamp(0.04 * d, 5e-5, h_base);
    };

    auto push_point = [&](double r) {
        if (r > 0.0 && nearest_zero_dist(r) < kZeroExclusion) return;
        const double v = dense->eval(r, 0);
        const double vp = dense->eval(r, 1);
        traj.grid_.push_back(r);
        traj.v_.push_back(v);
        traj.vp_.push_back(vp);
        traj.m_.push_back(v > 0.0 ? vp / v : kNaN);
    };

    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double r = edges[i];
        while (r < edges[i + 1]) {
            push_point(r);
            r = std::min(r + spacing(r), edges[i + 1]);
        }
    }
    push_point(r_max);
    return traj;
}

// ---------------------------------------------------------------------------
// Segment theorem

SegmentCheck verify_segment_theorem(const ModelTrajectory& traj, const TestFunction& psi,
                                    double tol) {
    if (!traj.rho()) {
        throw PreconditionError("verify_segment_theorem needs a finite conjugate radius");
    }
    const auto [lhs, rhs] = eval_segment_criterion(traj.q_ref(), psi, *traj.rho(), tol);
    return {lhs, rhs, lhs < rhs};
}

// ---------------------------------------------------------------------------
// Squeeze lemma

double SqueezeSolution::phi_at(double r) const {
    const double slack = 1e-9 * (1.0 + std::abs(b_));
    if (!(r >= a_ - slack && r <= b_ + slack)) throw DomainError("phi_at outside [a, b]");
    return dense_->eval(std::clamp(b_ - r, 0.0, b_ - a_), 0);
}

double SqueezeSolution::max_residual(double h) const {
    h = std::clamp(h, 1e-8, 0.125 * (b_ - a_));
    auto edges = q_.breakpoints(a_, b_);
    auto pe = psi_.breakpoints(a_, b_);
    edges.insert(edges.end(), pe.begin(), pe.end());
    edges.insert(edges.begin(), a_);
    edges.push_back(b_);
    std::sort(edges.begin(), edges.end());

    double worst = 0.0;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double lo = edges[s] + 2.0 * h, hi = edges[s + 1] - 2.0 * h;
        if (hi <= lo) continue;
        for (int i = 0; i <= 512; ++i) {
            const double r = lo + (hi - lo) * i / 512.0;
            // Five-point stencil keeps the FD truncation negligible against
            // the 1e-8 certificate.
            const double fd = (-phi_at(r + 2.0 * h) + 8.0 * phi_at(r + h) -
                               8.0 * phi_at(r - h) + phi_at(r - 2.0 * h)) /
                              (12.0 * h);
            const double qv = q_.value(r);
            const double pv = psi_.value(r);
            const double res = fd + psi_.derivative(r) * phi_at(r) * phi_at(r) -
                               qv / (pv * pv + qv);
            worst = std::max(worst, std::abs(res));
        }
    }
    return worst;
}

SqueezeSolution solve_squeeze(const RadialProfile& q, const TestFunction& psi, double a, double b,
                              double tol) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("solve_squeeze requires finite a < b");
    }
    const double lo = std::max(q.domain_start(), psi.domain_start());
    if (a < lo) throw DomainError("solve_squeeze interval starts below domain start");
    if (!(tol > 0.0)) throw DomainError("solve_squeeze requires tol > 0");

    SqueezeSolution sol(q, psi);
    sol.a_ = a;
    sol.b_ = b;
    sol.boundary_ = 1.0 / psi.value(b);

    // Left-moving construction: w(s) = phi(b - s) integrated forward in s.
    const auto rhs = [&](double s, const std::array<double, 1>& w, std::array<double, 1>& dw) {
        const double r = b - s;
        if (!(std::abs(w[0]) < 1e8)) {
            throw IntegrationError("squeeze solution blow-up at r = " + std::to_string(r), r);
        }
        const double qv = q.value(r);
        const double pv = psi.value(r);
        dw[0] = psi.derivative(r) * w[0] * w[0] - qv / (pv * pv + qv);
    };

    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = tol;
    // Keep steps short: the residual certificate differentiates the dense
    // output, so interpolation error must stay well below 1e-8.
    opt.max_step = std::min(1e-3, (b - a) / 16.0);
    auto dense = std::make_shared<DenseOutput<1>>();
    std::array<double, 1> w = {sol.boundary_};

    auto edges = q.breakpoints(a, b);
    auto pe = psi.breakpoints(a, b);
    edges.insert(edges.end(), pe.begin(), pe.end());
    std::sort(edges.begin(), edges.end(), std::greater<>());  // descending in r
    std::vector<double> s_edges = {0.0};
    for (double e : edges) s_edges.push_back(b - e);
    s_edges.push_back(b - a);
    for (std::size_t i = 0; i + 1 < s_edges.size(); ++i) {
        if (!(s_edges[i + 1] > s_edges[i])) continue;
        auto part = integrate_dopri5<1>(rhs, w, s_edges[i], s_edges[i + 1], opt);
        w = part.steps().back().y1;
        for (const auto& st : part.steps()) dense->push(st);
    }
    sol.dense_ = dense;

    const int n = 2000;
    sol.grid_.reserve(n + 1);
    sol.phi_.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double r = a + (b - a) * i / n;
        sol.grid_.push_back(r);
        sol.phi_.push_back(sol.phi_at(r));
    }
    return sol;
}

std::pair<double, double> verify_sandwich(const SqueezeSolution& sol,
                                          const ModelTrajectory& traj) {
    if (sol.b() > traj.r_max() + 1e-12) {
        throw PreconditionError("sandwich check: squeeze interval extends past the trajectory");
    }
    if (traj.zeta() && sol.b() > *traj.zeta() + 1e-9) {
        throw PreconditionError("sandwich check: interval extends past the mean-convex radius");
    }
    double lower = 0.0, upper = 0.0;
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
        const double r = sol.a() + (sol.b() - sol.a()) * i / n;
        const double phi = sol.phi_at(r);
        const double psi = sol.psi_ref().value(r);
        const double m = traj.m_at(r);
        lower = std::max(lower, 1.0 / (psi + m) - phi);
        upper = std::max(upper, phi - 1.0 / psi);
    }
    return {lower, upper};
}

// ---------------------------------------------------------------------------
// Second variation

SecondVariationCheck second_variation_check(const ModelTrajectory& traj, BumpKind kind, double a,
                                            double b, double tol) {
    if (!(b > a) || a < 0.0) throw DomainError("second_variation_check requires 0 <= a < b");
    if (traj.rho() && b > *traj.rho() + 1e-9) {
        throw PreconditionError("second_variation_check: b beyond the conjugate radius");
    }
    if (b > traj.r_max()) {
        throw PreconditionError("second_variation_check: b beyond the trajectory");
    }
    if (kind == BumpKind::constant && a == 0.0) {
        throw PreconditionError("constant bump needs a > 0 (u(0) != 0 while m(0) is singular)");
    }

    const double len = b - a;
    const auto u = [&](double r) -> double {
        switch (kind) {
            case BumpKind::sine: return std::sin(M_PI * (r - a) / len);
            case BumpKind::poly: return (r - a) * (b - r) / (0.25 * len * len);
            case BumpKind::constant: return 1.0;
        }
        return 0.0;
    };
    const auto du = [&](double r) -> double {
        switch (kind) {
            case BumpKind::sine: return M_PI / len * std::cos(M_PI * (r - a) / len);
            case BumpKind::poly: return (a + b - 2.0 * r) / (0.25 * len * len);
            case BumpKind::constant: return 0.0;
        }
        return 0.0;
    };

    const auto& q = traj.q_ref();
    const auto lhs = integrate_adaptive([&](double r) { return u(r) * u(r) * q.value(r); }, a, b,
                                        tol, q.breakpoints(a, b));
    const auto kinetic = integrate_adaptive([&](double r) { return du(r) * du(r); }, a, b, tol);

    // Endpoint-vanishing bumps drop the boundary terms exactly (u²m -> 0 in
    // the limit even where m is singular).
    double boundary = 0.0;
    if (kind == BumpKind::constant) {
        boundary = traj.m_at(b) - traj.m_at(a);
    }
    return {lhs.value, boundary + kinetic.value};
}

// ---------------------------------------------------------------------------
// Ray criterion on a conjugate-point-free model

RayCriterionCheck verify_ray_criterion_on_model(const RadialProfile& q, const TestFunction& psi,
                                                double a, double b, double tol, double horizon) {
    const double sim_to = std::isfinite(b) ? std::max(horizon, b) : horizon;
    const auto traj = simulate_model(q, sim_to, 1e-10);
    if (traj.rho()) {
        throw PreconditionError("model has a conjugate point at r = " + std::to_string(*traj.rho()) +
                                "; the ray criterion does not apply");
    }
    const auto F = eval_F(q, psi, a, b, tol);
    RayCriterionCheck out;
    out.F = F.value;
    out.bound = 1.0;
    out.holds = F.value <= 1.0 + 10.0 * tol;
    return out;
}

}  // namespace myers
