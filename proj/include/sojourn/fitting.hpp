#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace sojourn {

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;             ///< coefficient of determination
    double slope_stderr = 0;   ///< standard error of the slope
    double residual_rms = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// log-log power-law fit |y| ≈ coeff * x^exponent over positive data.
struct PowerFit {
    double exponent = 0;
    double coeff = 0;       ///< unsigned magnitude
    double r2 = 0;
    double exponent_stderr = 0;
};

PowerFit fit_power_law(std::span<const double> x, std::span<const double> y_abs);

/// Compensated (Kahan–Neumaier) accumulator; summation order fixed by the caller.
class KahanSum {
  public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0, comp_ = 0;
};

class KahanSumComplex {
  public:
    void add(std::complex<double> v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

  private:
    KahanSum re_, im_;
};

/// Extrapolate the h→0 limit of a sequence sampled on a geometric h grid,
/// assuming error ~ C h^p. With order <= 0 the order is estimated from the
/// last three values and clamped to [0.25, 3]; otherwise the given order is
/// used. Falls back to the last value when the sequence is too short or the
/// estimate is degenerate.
struct Extrapolation {
    std::complex<double> limit;
    double order_used = 0;
    bool extrapolated = false;
};

Extrapolation richardson_extrapolate(std::span<const double> h,
                                     std::span<const std::complex<double>> values,
                                     double order = 0.0);

}  // namespace sojourn
