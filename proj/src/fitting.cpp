#include "sojourn/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "sojourn/errors.hpp"

namespace sojourn {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    if (n != y.size() || n < 2) throw NumericalError("fit_line: need >= 2 paired samples");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw NumericalError("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.residual_rms = std::sqrt(ss_res / n);
    if (n > 2) f.slope_stderr = std::sqrt(ss_res / (n - 2) / sxx);
    return f;
}

PowerFit fit_power_law(std::span<const double> x, std::span<const double> y_abs) {
    if (x.size() != y_abs.size()) throw NumericalError("fit_power_law: size mismatch");
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0 || y_abs[i] <= 0) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y_abs[i]));
    }
    if (lx.size() < 2) throw NumericalError("fit_power_law: fewer than 2 positive samples");
    LineFit lf = fit_line(lx, ly);
    PowerFit pf;
    pf.exponent = lf.slope;
    pf.coeff = std::exp(lf.intercept);
    pf.r2 = lf.r2;
    pf.exponent_stderr = lf.slope_stderr;
    return pf;
}

Extrapolation richardson_extrapolate(std::span<const double> h,
                                     std::span<const std::complex<double>> values,
                                     double order) {
    Extrapolation out;
    const size_t n = values.size();
    if (n == 0) throw NumericalError("richardson_extrapolate: empty sequence");
    out.limit = values.back();
    if (n < 2) return out;

    const double ratio = h[n - 2] / h[n - 1];
    double p = order;
    if (p <= 0 && n >= 3) {
        // Aitken estimate from successive differences on the geometric grid.
        std::complex<double> d1 = values[n - 2] - values[n - 3];
        std::complex<double> d2 = values[n - 1] - values[n - 2];
        if (std::abs(d2) > 0 && std::abs(d1) > 0) {
            double r0 = h[n - 3] / h[n - 2];
            p = std::log(std::abs(d1) / std::abs(d2)) / std::log(0.5 * (ratio + r0));
            p = std::clamp(p, 0.25, 3.0);
        }
    }
    if (p <= 0) p = 0.5;

    std::complex<double> d = values[n - 1] - values[n - 2];
    double denom = std::pow(ratio, p) - 1.0;
    if (denom <= 0) return out;
    out.limit = values[n - 1] + d / denom;
    out.order_used = p;
    out.extrapolated = true;
    return out;
}

}  // namespace sojourn
