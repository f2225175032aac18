#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "myers/errors.hpp"

namespace myers {

struct OdeOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0 = choose automatically
    long max_steps = 4'000'000;
};

template <std::size_t N>
struct OdeStep {
    double t0, t1;
    std::array<double, N> y0, y1, f0, f1;
};

/// Dense solution of a forward integration: cubic Hermite interpolation of
/// every accepted step, using the exact endpoint derivatives.
template <std::size_t N>
class DenseOutput {
public:
    double t_begin() const { return steps_.front().t0; }
    double t_end() const { return steps_.back().t1; }
    const std::vector<OdeStep<N>>& steps() const { return steps_; }

    double eval(double t, std::size_t comp) const {
        const OdeStep<N>& s = locate(t);
        const double h = s.t1 - s.t0;
        const double th = std::clamp((t - s.t0) / h, 0.0, 1.0);
        const double t2 = th * th, t3 = t2 * th;
        return (2 * t3 - 3 * t2 + 1) * s.y0[comp] + (t3 - 2 * t2 + th) * h * s.f0[comp] +
               (-2 * t3 + 3 * t2) * s.y1[comp] + (t3 - t2) * h * s.f1[comp];
    }

    void push(const OdeStep<N>& s) { steps_.push_back(s); }

private:
    const OdeStep<N>& locate(double t) const {
        auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                                   [](double v, const OdeStep<N>& s) { return v < s.t0; });
        if (it != steps_.begin()) --it;
        return *it;
    }

    std::vector<OdeStep<N>> steps_;
};

/// Explicit Dormand-Prince 5(4) pair with FSAL and step-size control.
/// RHS signature: f(t, y, dy).
template <std::size_t N, class RHS>
DenseOutput<N> integrate_dopri5(RHS&& f, std::array<double, N> y, double t0, double t1,
                                const OdeOptions& opt = {}) {
    static constexpr double A[6][6] = {
        {1.0 / 5, 0, 0, 0, 0, 0},
        {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
        {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    static constexpr double C[6] = {1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double B5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784,  11.0 / 84,  0.0};
    static constexpr double B4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    if (!(t1 > t0)) throw DomainError("integrate_dopri5 requires t1 > t0");

    DenseOutput<N> out;
    std::array<std::array<double, N>, 7> k;
    std::array<double, N> y_stage, y_next;

    double t = t0;
    f(t, y, k[0]);
    double h = opt.initial_step;
    if (h <= 0.0) {
        double scale = opt.abs_tol;
        for (std::size_t i = 0; i < N; ++i) scale = std::max(scale, std::abs(k[0][i]));
        h = std::min({0.01 * (t1 - t0), opt.max_step, 0.1 / std::max(scale, 1e-12)});
        h = std::max(h, 1e-10 * (t1 - t0));
    }

    for (long step = 0; step < opt.max_steps; ++step) {
        if (t >= t1) return out;
        h = std::min({h, t1 - t, opt.max_step});
        if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
            throw IntegrationError("step size underflow at r = " + std::to_string(t), t);
        }

        for (int s = 0; s < 6; ++s) {
            for (std::size_t i = 0; i < N; ++i) {
                double acc = 0.0;
                for (int j = 0; j <= s; ++j) acc += A[s][j] * k[j][i];
                y_stage[i] = y[i] + h * acc;
            }
            f(t + C[s] * h, y_stage, k[s + 1]);
        }
        // Stage 6 already produced the 5th-order solution (A row 6 == B5).
        y_next = y_stage;

        double err_norm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double e = 0.0;
            for (int j = 0; j < 7; ++j) e += (B5[j] - B4[j]) * k[j][i];
            e *= h;
            const double sc =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_next[i]));
            err_norm += (e / sc) * (e / sc);
        }
        err_norm = std::sqrt(err_norm / N);

        if (err_norm <= 1.0) {
            OdeStep<N> rec;
            rec.t0 = t;
            rec.t1 = t + h;
            rec.y0 = y;
            rec.y1 = y_next;
            rec.f0 = k[0];
            rec.f1 = k[6];
            out.push(rec);
            t += h;
            y = y_next;
            k[0] = k[6];  // FSAL
        }
        const double factor =
            err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    throw IntegrationError("exceeded max step count at r = " + std::to_string(t), t);
}

/// Root of component `comp` of the dense solution inside [lo, hi] (a sign
/// change is required), bisected to relative tolerance rel_tol.
template <std::size_t N>
double bisect_dense_root(const DenseOutput<N>& sol, std::size_t comp, double lo, double hi,
                         double rel_tol = 1e-12) {
    double flo = sol.eval(lo, comp);
    double fhi = sol.eval(hi, comp);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw PreconditionError("bisect_dense_root: no sign change in bracket");
    while (hi - lo > rel_tol * std::max({std::abs(lo), std::abs(hi), 1e-300})) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = sol.eval(mid, comp);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace myers
