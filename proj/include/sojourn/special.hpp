#pragma once

#include <cmath>

#include "sojourn/errors.hpp"

namespace sojourn {

/// Hurwitz zeta ζ(s, a) = Σ_{k>=0} (a+k)^{-s} for s > 1, a > 0, by
/// Euler–Maclaurin with a short direct sum.
inline double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a > 0.0)) throw NumericalError("hurwitz_zeta: need s > 1, a > 0");
    const int N = 12;
    double sum = 0;
    for (int k = 0; k < N; ++k) sum += std::pow(a + k, -s);
    const double z = a + N;
    sum += std::pow(z, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(z, -s);
    // Bernoulli tail: B2=1/6, B4=-1/30, B6=1/42, B8=-1/30
    const double B[4] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30};
    double poch = s;             // (s)_{2j-1} built incrementally
    double zpow = std::pow(z, -s - 1.0);
    double fact = 2.0;           // (2j)!
    for (int j = 1; j <= 4; ++j) {
        sum += B[j - 1] * poch / fact * zpow;
        // advance (s)_{2j-1} -> (s)_{2j+1}, (2j)! -> (2j+2)!, z^{-s-2j+1} -> ...
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        zpow /= z * z;
    }
    return sum;
}

/// I_α = ∫ (1+t²)^{-α/2} dt = sqrt(π) Γ((α−1)/2)/Γ(α/2), the transverse
/// line-integral constant of the power-law eikonal phase.
inline double power_line_integral(double alpha) {
    if (!(alpha > 1.0)) throw NumericalError("power_line_integral: need alpha > 1");
    return std::sqrt(M_PI) * std::exp(std::lgamma(0.5 * (alpha - 1.0)) - std::lgamma(0.5 * alpha));
}

}  // namespace sojourn
