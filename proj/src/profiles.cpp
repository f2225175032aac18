#include "myers/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "myers/errors.hpp"

namespace myers {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

// Index of the table segment containing r: xs[i] <= r <= xs[i+1].
std::size_t segment_index(const std::vector<double>& xs, double r) {
    auto it = std::upper_bound(xs.begin(), xs.end(), r);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    if (i > 0) --i;
    if (i + 1 >= xs.size()) i = xs.size() - 2;
    return i;
}

double lerp_table(const std::vector<double>& xs, const std::vector<double>& ys, double r) {
    std::size_t i = segment_index(xs, r);
    const double t = (r - xs[i]) / (xs[i + 1] - xs[i]);
    return ys[i] + t * (ys[i + 1] - ys[i]);
}

}  // namespace

namespace detail {

struct ProfileImpl {
    RadialProfile::Family family;
    double c = 0.0;
    double p = 0.0;
    double cutoff = 0.0;
    std::vector<std::pair<double, RadialProfile>> pieces;
    double pieces_end = kInf;
    std::vector<double> xs, qs;
    double table_horizon = kInf;
    std::string label;

    double domain_start() const {
        switch (family) {
            case RadialProfile::Family::piecewise: return pieces.front().first;
            case RadialProfile::Family::sampled: return xs.front();
            default: return 0.0;
        }
    }

    double horizon() const {
        switch (family) {
            case RadialProfile::Family::piecewise: return pieces_end;
            case RadialProfile::Family::sampled: return table_horizon;
            default: return kInf;
        }
    }

    void check_range(double r) const {
        if (!(r >= domain_start()) || r > horizon()) {
            throw DomainError("radius " + fmt_g(r) + " outside domain [" +
                              fmt_g(domain_start()) + ", " + fmt_g(horizon()) + "] of " + label);
        }
    }

    double value(double r) const {
        check_range(r);
        switch (family) {
            case RadialProfile::Family::constant:
                return c;
            case RadialProfile::Family::poly_decay:
                return c / std::pow(std::max(r, cutoff), p);
            case RadialProfile::Family::exp_decay:
                return c * std::exp(-p * r);
            case RadialProfile::Family::piecewise: {
                auto it = std::upper_bound(
                    pieces.begin(), pieces.end(), r,
                    [](double v, const auto& piece) { return v < piece.first; });
                if (it != pieces.begin()) --it;
                return it->second.value(r);
            }
            case RadialProfile::Family::sampled:
                if (r >= xs.back()) return qs.back();
                return lerp_table(xs, qs, r);
        }
        return 0.0;
    }

    double derivative(double r) const {
        check_range(r);
        switch (family) {
            case RadialProfile::Family::constant:
                return 0.0;
            case RadialProfile::Family::poly_decay:
                if (r < cutoff) return 0.0;
                return -p * c * std::pow(r, -p - 1.0);
            case RadialProfile::Family::exp_decay:
                return -p * c * std::exp(-p * r);
            case RadialProfile::Family::piecewise: {
                auto it = std::upper_bound(
                    pieces.begin(), pieces.end(), r,
                    [](double v, const auto& piece) { return v < piece.first; });
                if (it != pieces.begin()) --it;
                return it->second.derivative(r);
            }
            case RadialProfile::Family::sampled: {
                if (r >= xs.back()) return 0.0;
                std::size_t i = segment_index(xs, r);
                return (qs[i + 1] - qs[i]) / (xs[i + 1] - xs[i]);
            }
        }
        return 0.0;
    }

    double integral_on(double r0, double r1) const {
        if (!(r0 <= r1)) throw DomainError("integral_on requires r0 <= r1");
        check_range(r0);
        check_range(r1);
        switch (family) {
            case RadialProfile::Family::constant:
                return c * (r1 - r0);
            case RadialProfile::Family::poly_decay: {
                double total = 0.0;
                const double flat_hi = std::min(r1, cutoff);
                if (flat_hi > r0) total += c * std::pow(cutoff, -p) * (flat_hi - r0);
                const double lo = std::max(r0, cutoff);
                if (r1 > lo) {
                    if (p == 1.0) {
                        total += c * std::log(r1 / lo);
                    } else {
                        total += c * (std::pow(r1, 1.0 - p) - std::pow(lo, 1.0 - p)) / (1.0 - p);
                    }
                }
                return total;
            }
            case RadialProfile::Family::exp_decay:
                if (p == 0.0) return c * (r1 - r0);
                return c * (std::exp(-p * r0) - std::exp(-p * r1)) / p;
            case RadialProfile::Family::piecewise: {
                double total = 0.0;
                for (std::size_t i = 0; i < pieces.size(); ++i) {
                    const double s = pieces[i].first;
                    const double e = (i + 1 < pieces.size()) ? pieces[i + 1].first : pieces_end;
                    const double lo = std::max(r0, s);
                    const double hi = std::min(r1, e);
                    if (hi > lo) total += pieces[i].second.integral_on(lo, hi);
                }
                return total;
            }
            case RadialProfile::Family::sampled: {
                // Trapezoid rule is exact on the piecewise-linear interpolant.
                auto q_at = [&](double r) {
                    return r >= xs.back() ? qs.back() : lerp_table(xs, qs, r);
                };
                double total = 0.0;
                double prev_r = r0, prev_q = q_at(r0);
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (xs[i] <= prev_r) continue;
                    if (xs[i] >= r1) break;
                    total += 0.5 * (prev_q + qs[i]) * (xs[i] - prev_r);
                    prev_r = xs[i];
                    prev_q = qs[i];
                }
                total += 0.5 * (prev_q + q_at(r1)) * (r1 - prev_r);
                return total;
            }
        }
        return 0.0;
    }

    double tail_bound(double R) const {
        R = std::max(R, domain_start());
        switch (family) {
            case RadialProfile::Family::constant:
                return c == 0.0 ? 0.0 : kInf;
            case RadialProfile::Family::poly_decay: {
                if (c == 0.0) return 0.0;
                if (p <= 1.0) return kInf;
                const double lo = std::max(R, cutoff);
                double total = c * std::pow(lo, 1.0 - p) / (p - 1.0);
                if (R < cutoff) total += c * std::pow(cutoff, -p) * (cutoff - R);
                return total;
            }
            case RadialProfile::Family::exp_decay:
                if (c == 0.0) return 0.0;
                if (p <= 0.0) return kInf;
                return c * std::exp(-p * R) / p;
            case RadialProfile::Family::piecewise: {
                double total = 0.0;
                for (std::size_t i = 0; i < pieces.size(); ++i) {
                    const double s = pieces[i].first;
                    const double e = (i + 1 < pieces.size()) ? pieces[i + 1].first : pieces_end;
                    if (e <= R) continue;
                    const double lo = std::max(R, s);
                    if (std::isfinite(e)) {
                        total += pieces[i].second.integral_on(lo, e);
                    } else {
                        const double t = pieces[i].second.tail_bound(lo);
                        if (!std::isfinite(t)) return kInf;
                        total += t;
                    }
                }
                return total;
            }
            case RadialProfile::Family::sampled:
                return kInf;  // finite-horizon tables say nothing about the tail
        }
        return kInf;
    }

    void append_breakpoints(double lo, double hi, std::vector<double>& out) const {
        auto add = [&](double b) {
            if (b > lo && b < hi) out.push_back(b);
        };
        switch (family) {
            case RadialProfile::Family::poly_decay:
                add(cutoff);
                break;
            case RadialProfile::Family::piecewise:
                for (std::size_t i = 0; i < pieces.size(); ++i) {
                    if (i > 0) add(pieces[i].first);
                    pieces[i].second.impl_->append_breakpoints(lo, hi, out);
                }
                break;
            case RadialProfile::Family::sampled:
                for (double x : xs) add(x);
                break;
            default:
                break;
        }
    }
};

struct TestFunctionImpl {
    TestFunction::Family family;
    double x = 0.0;                 // constant
    double k = 0.0, alpha = 0.0;    // power
    double ds = 0.0;
    std::shared_ptr<const ProfileImpl> base;  // sqrt_profile
    std::vector<double> xs, vs, dvs;          // sampled
    double table_horizon = kInf;
    Monotonicity mono = Monotonicity::non_decreasing;
    std::string label;

    double horizon() const {
        if (family == TestFunction::Family::sampled) return table_horizon;
        if (family == TestFunction::Family::sqrt_profile) return base->horizon();
        return kInf;
    }

    void check_range(double r) const {
        if (!(r >= ds) || r > horizon()) {
            throw DomainError("radius " + fmt_g(r) + " outside domain [" + fmt_g(ds) + ", " +
                              fmt_g(horizon()) + "] of " + label);
        }
    }

    double value(double r) const {
        check_range(r);
        switch (family) {
            case TestFunction::Family::constant:
                return x;
            case TestFunction::Family::power:
                return k * std::pow(r, -alpha);
            case TestFunction::Family::sqrt_profile: {
                const double q = base->value(r);
                if (!(q > 0.0)) {
                    throw PositivityError("sqrt_of_profile over a region where q = 0 (r = " +
                                          fmt_g(r) + ")");
                }
                return std::sqrt(q);
            }
            case TestFunction::Family::sampled:
                if (r >= xs.back()) return vs.back();
                return lerp_table(xs, vs, r);
        }
        return 0.0;
    }

    double derivative(double r) const {
        check_range(r);
        switch (family) {
            case TestFunction::Family::constant:
                return 0.0;
            case TestFunction::Family::power:
                return -alpha * k * std::pow(r, -alpha - 1.0);
            case TestFunction::Family::sqrt_profile: {
                const double q = base->value(r);
                if (!(q > 0.0)) {
                    throw PositivityError("sqrt_of_profile over a region where q = 0 (r = " +
                                          fmt_g(r) + ")");
                }
                return base->derivative(r) / (2.0 * std::sqrt(q));
            }
            case TestFunction::Family::sampled:
                if (r >= xs.back()) return 0.0;
                return lerp_table(xs, dvs, r);
        }
        return 0.0;
    }

    double tail_infimum(double R) const {
        R = std::max(R, ds);
        switch (family) {
            case TestFunction::Family::constant:
                return x;
            case TestFunction::Family::power:
                if (alpha > 0.0) return 0.0;
                return value(R);  // constant or increasing
            case TestFunction::Family::sqrt_profile:
                switch (base->family) {
                    case RadialProfile::Family::constant:
                        return std::sqrt(base->c);
                    case RadialProfile::Family::poly_decay:
                        if (base->p > 0.0) return 0.0;
                        return value(R);
                    case RadialProfile::Family::exp_decay:
                        if (base->p > 0.0) return 0.0;
                        if (base->p == 0.0) return std::sqrt(base->c);
                        return value(R);
                    default: {
                        // Sample-based lower estimate over the remaining domain.
                        const double hi = std::min(horizon(), R + 1e6);
                        double lo_val = value(R);
                        for (int i = 1; i <= 1024; ++i) {
                            const double r = R + (hi - R) * i / 1024.0;
                            lo_val = std::min(lo_val, value(r));
                        }
                        return lo_val;
                    }
                }
            case TestFunction::Family::sampled: {
                double lo_val = value(R);
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (xs[i] >= R) lo_val = std::min(lo_val, vs[i]);
                }
                return std::min(lo_val, vs.back());
            }
        }
        return 0.0;
    }

    // Sample grid used for positivity and monotonicity verification.
    std::vector<double> check_grid() const {
        const double lo = ds;
        const double hi = std::min(horizon(), std::max(lo + 100.0, lo * 2.0));
        std::vector<double> g;
        g.reserve(1001);
        for (int i = 0; i <= 1000; ++i) g.push_back(lo + (hi - lo) * i / 1000.0);
        return g;
    }

    void verify_positive_and_monotone() const {
        const auto grid = check_grid();
        double prev = value(grid.front());
        if (!(prev > 0.0) || !std::isfinite(prev)) {
            throw PositivityError(label + " is not strictly positive at r = " +
                                  fmt_g(grid.front()));
        }
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double cur = value(grid[i]);
            if (!(cur > 0.0) || !std::isfinite(cur)) {
                throw PositivityError(label + " is not strictly positive at r = " +
                                      fmt_g(grid[i]));
            }
            const double slack = 1e-12 * (1.0 + std::abs(prev));
            if (mono == Monotonicity::non_decreasing && cur < prev - slack) {
                throw MonotonicityError(label + " declared non-decreasing but decreases near r = " +
                                        fmt_g(grid[i]));
            }
            if (mono == Monotonicity::non_increasing && cur > prev + slack) {
                throw MonotonicityError(label + " declared non-increasing but increases near r = " +
                                        fmt_g(grid[i]));
            }
            prev = cur;
        }
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(std::shared_ptr<const detail::ProfileImpl> impl)
    : impl_(std::move(impl)) {}

double RadialProfile::infinite_radius() { return kInf; }

RadialProfile RadialProfile::constant(double c) {
    require_finite(c, "c");
    if (c < 0.0) throw DomainError("constant profile requires c >= 0");
    auto impl = std::make_shared<detail::ProfileImpl>();
    impl->family = Family::constant;
    impl->c = c;
    impl->label = "constant(c=" + fmt_g(c) + ")";
    return RadialProfile(impl);
}

RadialProfile RadialProfile::poly_decay(double c, double p, double cutoff) {
    require_finite(c, "c");
    require_finite(p, "p");
    require_finite(cutoff, "cutoff");
    if (c < 0.0) throw DomainError("poly_decay requires c >= 0");
    if (cutoff <= 0.0) throw DomainError("poly_decay requires cutoff > 0");
    auto impl = std::make_shared<detail::ProfileImpl>();
    impl->family = Family::poly_decay;
    impl->c = c;
    impl->p = p;
    impl->cutoff = cutoff;
    impl->label =
        "poly_decay(c=" + fmt_g(c) + ", p=" + fmt_g(p) + ", a0=" + fmt_g(cutoff) + ")";
    return RadialProfile(impl);
}

RadialProfile RadialProfile::exp_decay(double c, double p) {
    require_finite(c, "c");
    require_finite(p, "p");
    if (c < 0.0) throw DomainError("exp_decay requires c >= 0");
    auto impl = std::make_shared<detail::ProfileImpl>();
    impl->family = Family::exp_decay;
    impl->c = c;
    impl->p = p;
    impl->label = "exp_decay(c=" + fmt_g(c) + ", p=" + fmt_g(p) + ")";
    return RadialProfile(impl);
}

RadialProfile RadialProfile::piecewise(std::vector<std::pair<double, RadialProfile>> pieces,
                                       double end) {
    if (pieces.empty()) throw DomainError("piecewise profile needs at least one piece");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        require_finite(pieces[i].first, "piece start");
        if (i > 0 && !(pieces[i].first > pieces[i - 1].first)) {
            throw DomainError("piecewise starts must be strictly increasing");
        }
        if (pieces[i].second.domain_start() > pieces[i].first) {
            throw DomainError("piece sub-profile does not cover its interval start");
        }
        const double piece_end = (i + 1 < pieces.size()) ? pieces[i + 1].first : end;
        if (pieces[i].second.horizon() < piece_end) {
            throw DomainError("piece sub-profile horizon ends before its interval");
        }
    }
    if (!(end > pieces.back().first)) throw DomainError("piecewise end must exceed last start");
    auto impl = std::make_shared<detail::ProfileImpl>();
    impl->family = Family::piecewise;
    impl->pieces = std::move(pieces);
    impl->pieces_end = end;
    impl->label = "piecewise(" + std::to_string(impl->pieces.size()) + " pieces)";
    RadialProfile out(impl);
    // Dense nonnegativity spot check across the assembled profile.
    const double lo = out.domain_start();
    const double hi = std::isfinite(end) ? end : lo + 100.0;
    for (int i = 0; i <= 256; ++i) {
        const double r = lo + (hi - lo) * i / 256.0;
        if (out.value(r) < 0.0) throw DomainError("piecewise profile is negative at r = " + fmt_g(r));
    }
    return out;
}

RadialProfile RadialProfile::sampled(std::vector<double> radii, std::vector<double> values,
                                     double horizon) {
    if (radii.size() < 2 || radii.size() != values.size()) {
        throw DomainError("sampled profile needs matching tables with >= 2 rows");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        require_finite(radii[i], "r");
        require_finite(values[i], "q");
        if (i > 0 && !(radii[i] > radii[i - 1])) {
            throw DomainError("sampled radii must be strictly increasing");
        }
        if (values[i] < 0.0) throw DomainError("sampled q values must be nonnegative");
    }
    if (!(horizon >= radii.back())) {
        throw DomainError("sampled horizon must reach at least the last sample");
    }
    auto impl = std::make_shared<detail::ProfileImpl>();
    impl->family = Family::sampled;
    impl->xs = std::move(radii);
    impl->qs = std::move(values);
    impl->table_horizon = horizon;
    impl->label = "sampled(" + std::to_string(impl->xs.size()) +
                  " points, horizon=" + fmt_g(horizon) + ")";
    return RadialProfile(impl);
}

double RadialProfile::value(double r) const { return impl_->value(r); }
double RadialProfile::derivative(double r) const { return impl_->derivative(r); }
double RadialProfile::tail_bound(double R) const { return impl_->tail_bound(R); }
double RadialProfile::integral_on(double r0, double r1) const { return impl_->integral_on(r0, r1); }
double RadialProfile::domain_start() const { return impl_->domain_start(); }
double RadialProfile::horizon() const { return impl_->horizon(); }
RadialProfile::Family RadialProfile::family() const { return impl_->family; }
const std::string& RadialProfile::description() const { return impl_->label; }

std::vector<double> RadialProfile::breakpoints(double lo, double hi) const {
    std::vector<double> out;
    impl_->append_breakpoints(lo, hi, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double RadialProfile::param_c() const {
    if (impl_->family == Family::piecewise || impl_->family == Family::sampled) {
        throw DomainError(impl_->label + " has no scalar c parameter");
    }
    return impl_->c;
}

double RadialProfile::param_p() const {
    if (impl_->family != Family::poly_decay && impl_->family != Family::exp_decay) {
        throw DomainError(impl_->label + " has no decay rate p");
    }
    return impl_->p;
}

double RadialProfile::param_cutoff() const {
    if (impl_->family != Family::poly_decay) {
        throw DomainError(impl_->label + " has no cutoff");
    }
    return impl_->cutoff;
}

// ---------------------------------------------------------------------------
// TestFunction

TestFunction::TestFunction(std::shared_ptr<const detail::TestFunctionImpl> impl)
    : impl_(std::move(impl)) {}

TestFunction TestFunction::constant(double x) {
    require_finite(x, "x");
    if (!(x > 0.0)) throw PositivityError("constant test function requires x > 0");
    auto impl = std::make_shared<detail::TestFunctionImpl>();
    impl->family = Family::constant;
    impl->x = x;
    impl->mono = Monotonicity::non_decreasing;
    impl->label = "constant(x=" + fmt_g(x) + ")";
    return TestFunction(impl);
}

TestFunction TestFunction::power(double k, double alpha, double domain_start) {
    require_finite(k, "k");
    require_finite(alpha, "alpha");
    require_finite(domain_start, "domain_start");
    if (!(k > 0.0)) throw PositivityError("power test function requires k > 0");
    if (alpha != 0.0 && !(domain_start > 0.0)) {
        throw DomainError("power test function requires domain_start > 0");
    }
    auto impl = std::make_shared<detail::TestFunctionImpl>();
    impl->family = Family::power;
    impl->k = k;
    impl->alpha = alpha;
    impl->ds = domain_start;
    impl->mono = alpha >= 0.0 ? Monotonicity::non_increasing : Monotonicity::non_decreasing;
    impl->label = "power(k=" + fmt_g(k) + ", alpha=" + fmt_g(alpha) + ")";
    auto out = TestFunction(impl);
    impl->verify_positive_and_monotone();
    return out;
}

TestFunction TestFunction::sqrt_of_profile(const RadialProfile& q) {
    auto impl = std::make_shared<detail::TestFunctionImpl>();
    impl->family = Family::sqrt_profile;
    impl->base = q.impl_;
    impl->ds = q.domain_start();
    impl->label = "sqrt(" + q.description() + ")";
    // Infer the monotone direction from samples, then verify it strictly.
    const auto grid = impl->check_grid();
    bool up = false, down = false;
    double prev = impl->value(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = impl->value(grid[i]);
        const double slack = 1e-12 * (1.0 + std::abs(prev));
        if (cur > prev + slack) up = true;
        if (cur < prev - slack) down = true;
        prev = cur;
    }
    if (up && down) {
        throw MonotonicityError(impl->label + " is not monotone");
    }
    impl->mono = up ? Monotonicity::non_decreasing : Monotonicity::non_increasing;
    auto out = TestFunction(impl);
    impl->verify_positive_and_monotone();
    return out;
}

TestFunction TestFunction::sampled(std::vector<double> radii, std::vector<double> values,
                                   std::vector<double> derivatives, double horizon,
                                   Monotonicity declared) {
    if (radii.size() < 2 || radii.size() != values.size() || radii.size() != derivatives.size()) {
        throw DomainError("sampled test function needs matching tables with >= 2 rows");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        require_finite(radii[i], "r");
        require_finite(values[i], "psi");
        require_finite(derivatives[i], "psi'");
        if (i > 0 && !(radii[i] > radii[i - 1])) {
            throw DomainError("sampled radii must be strictly increasing");
        }
    }
    if (!(horizon >= radii.back())) {
        throw DomainError("sampled horizon must reach at least the last sample");
    }
    auto impl = std::make_shared<detail::TestFunctionImpl>();
    impl->family = Family::sampled;
    impl->xs = std::move(radii);
    impl->vs = std::move(values);
    impl->dvs = std::move(derivatives);
    impl->table_horizon = horizon;
    impl->ds = impl->xs.front();
    impl->mono = declared;
    impl->label = "sampled_psi(" + std::to_string(impl->xs.size()) + " points)";
    auto out = TestFunction(impl);
    impl->verify_positive_and_monotone();
    return out;
}

double TestFunction::value(double r) const { return impl_->value(r); }
double TestFunction::derivative(double r) const { return impl_->derivative(r); }
Monotonicity TestFunction::monotonicity() const { return impl_->mono; }
double TestFunction::domain_start() const { return impl_->ds; }
double TestFunction::horizon() const { return impl_->horizon(); }
double TestFunction::tail_infimum(double R) const { return impl_->tail_infimum(R); }
TestFunction::Family TestFunction::family() const { return impl_->family; }
const std::string& TestFunction::description() const { return impl_->label; }

std::vector<double> TestFunction::breakpoints(double lo, double hi) const {
    std::vector<double> out;
    if (impl_->family == Family::sqrt_profile) {
        impl_->base->append_breakpoints(lo, hi, out);
    } else if (impl_->family == Family::sampled) {
        for (double x : impl_->xs) {
            if (x > lo && x < hi) out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace myers
