#pragma once

#include <functional>

namespace sojourn {

struct QuadResult {
    double value = 0;
    double error_estimate = 0;
    int evaluations = 0;
};

/// Adaptive Gauss–Kronrod 15(7) on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-12, int max_depth = 60);

/// ∫_a^∞ f, mapped through r = a + t/(1−t) onto (0,1). The integrand must decay
/// at least like r^{-p} with p > 1.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 double abs_tol = 1e-13, double rel_tol = 1e-12);

/// ∫_{-∞}^b f, mirrored version of integrate_to_infinity.
QuadResult integrate_from_minus_infinity(const std::function<double(double)>& f, double b,
                                         double abs_tol = 1e-13, double rel_tol = 1e-12);

}  // namespace sojourn
