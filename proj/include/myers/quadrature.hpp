#pragma once

#include <functional>
#include <vector>

namespace myers {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // accumulated panel error estimate
};

/// Adaptive quadrature of f over the finite interval [a, b] to the given
/// absolute tolerance: Gauss-Kronrod 7-15 panels with embedded error
/// estimate, bisected recursively (depth limit 60). The interval is split
/// first at the supplied breakpoints so only smooth panels are refined.
/// Throws QuadratureError carrying the best estimate when the depth limit
/// is hit before the tolerance is met.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol, const std::vector<double>& breakpoints = {});

}  // namespace myers
