#include "sojourn/quadrature.hpp"

#include <cmath>

#include "sojourn/errors.hpp"

namespace sojourn {
namespace {

// Gauss–Kronrod 15-point nodes/weights on [-1,1]; the embedded 7-point Gauss
// rule uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double gk = 0, err = 0;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double fc = f(c);
    double res_g = fc * kWg[3];
    double res_k = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = hw * kXgk[j];
        double f1 = f(c - x), f2 = f(c + x);
        res_k += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
    }
    PanelResult r;
    r.gk = res_k * hw;
    r.err = std::abs((res_k - res_g) * hw);
    return r;
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
           int max_depth, QuadResult& out) {
    PanelResult p = gk15(f, a, b);
    out.evaluations += 15;
    if (p.err <= tol || depth >= max_depth) {
        out.value += p.gk;
        out.error_estimate += p.err;
        return;
    }
    double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1, max_depth, out);
    adapt(f, m, b, 0.5 * tol, depth + 1, max_depth, out);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_depth) {
    QuadResult out;
    if (a == b) return out;
    PanelResult first = gk15(f, a, b);
    double tol = std::max(abs_tol, rel_tol * std::abs(first.gk));
    adapt(f, a, b, tol, 0, max_depth, out);
    return out;
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a, double abs_tol,
                                 double rel_tol) {
    auto g = [&](double t) {
        double om = 1.0 - t;
        double r = a + t / om;
        return f(r) / (om * om);
    };
    return integrate(g, 0.0, 1.0 - 1e-14, abs_tol, rel_tol);
}

QuadResult integrate_from_minus_infinity(const std::function<double(double)>& f, double b,
                                         double abs_tol, double rel_tol) {
    auto g = [&](double r) { return f(2 * b - r); };
    return integrate_to_infinity(g, b, abs_tol, rel_tol);
}

}  // namespace sojourn
