#include "sojourn/bessel.hpp"

#include <cmath>
#include <complex>

#include "sojourn/errors.hpp"
#include "sojourn/quadrature.hpp"

namespace sojourn {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct DebyeTerm {
    int degree;
    double coeff;
};
struct DebyeSeries {
    const DebyeTerm* terms;
    int count;
};

#include "debye_tables.inc"

constexpr int kDebyeOrders = 9;
constexpr int kMaxMonomial = 3 * (kDebyeOrders - 1);

double debye_sum(const DebyeSeries* series, const double* tau_pow, const double* nu_pow, int k) {
    const DebyeSeries& s = series[k];
    double acc = 0;
    for (int i = 0; i < s.count; ++i) {
        int m = s.terms[i].degree;
        acc += s.terms[i].coeff * tau_pow[m] * nu_pow[m - k];
    }
    return acc;
}

struct Powers {
    double tau[kMaxMonomial + 1];
    double nu[kMaxMonomial + 1];
};

Powers make_powers(double tau, double nu) {
    Powers p;
    p.tau[0] = 1.0;
    p.nu[0] = 1.0;
    for (int i = 1; i <= kMaxMonomial; ++i) {
        p.tau[i] = p.tau[i - 1] * tau;
        p.nu[i] = p.nu[i - 1] * nu;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Region A: oscillatory Debye expansion, x well above the turning point x = ν.
//   H = J + iY = sqrt(2/(π x w)) e^{iξ} Σ_k (−i)^k û_k/ν^k,  ξ = xw − νβ − π/4
//   H' = i sqrt(2w/(π x)) e^{iξ} Σ_k (−i)^k v̂_k/ν^k
// û_k, v̂_k are the i-rotated Debye polynomials; the monomial t^m/ν^k is
// evaluated as τ^m ν^{m−k} with τ = 1/(xw), finite down to ν = 0.
// ---------------------------------------------------------------------------
CylinderPair debye_oscillatory(double nu, double x) {
    const double p = nu / x;
    const double w = std::sqrt((1.0 - p) * (1.0 + p));
    const double beta = std::atan2(w, p);
    const double xi = x * w - nu * beta - 0.25 * kPi;
    const Powers pw = make_powers(1.0 / (x * w), nu);

    double u_re = 0, u_im = 0, v_re = 0, v_im = 0;
    double sign = 1.0;
    for (int k = 0; k < kDebyeOrders; k += 2, sign = -sign) {
        u_re += sign * debye_sum(kUOSC, pw.tau, pw.nu, k);
        v_re += sign * debye_sum(kVOSC, pw.tau, pw.nu, k);
    }
    sign = -1.0;
    for (int k = 1; k < kDebyeOrders; k += 2, sign = -sign) {
        u_im += sign * debye_sum(kUOSC, pw.tau, pw.nu, k);
        v_im += sign * debye_sum(kVOSC, pw.tau, pw.nu, k);
    }

    const double amp = std::sqrt(2.0 / (kPi * x * w));
    const double ampd = std::sqrt(2.0 * w / (kPi * x));
    const double c = std::cos(xi), s = std::sin(xi);

    CylinderPair out;
    out.J = amp * (c * u_re - s * u_im);
    out.Y = amp * (s * u_re + c * u_im);
    out.Jp = ampd * (-s * v_re - c * v_im);
    out.Yp = ampd * (c * v_re - s * v_im);
    return out;
}

// ---------------------------------------------------------------------------
// Region B: forbidden-side Debye expansion, x well below ν; scaled by e^{±νη}.
//   J  =  e^{−νη}/sqrt(2πν tanhμ) Σ u_k(cothμ)/ν^k
//   Y  = −e^{+νη} sqrt(2/(πν tanhμ)) Σ (−1)^k u_k/ν^k
//   J' =  e^{−νη} sqrt(sinh2μ/(4πν)) Σ v_k/ν^k
//   Y' =  e^{+νη} sqrt(sinh2μ/(πν)) Σ (−1)^k v_k/ν^k
// with x = ν sechμ, η = μ − tanhμ.
// ---------------------------------------------------------------------------
struct ScaledCylinder {
    double J, Y, Jp, Yp;  // true J = J·e^{−E}, Y = Y·e^{+E}, same pattern for '
    double E;
};

ScaledCylinder debye_forbidden(double nu, double x) {
    const double p = nu / x;  // > 1
    const double w = std::sqrt((p - 1.0) * (p + 1.0));
    const double tanhmu = w / p;
    const double mu = std::atanh(tanhmu);
    const double eta = mu - tanhmu;
    const Powers pw = make_powers(1.0 / (x * w), nu);

    double su_p = 0, su_m = 0, sv_p = 0, sv_m = 0;
    double sign = 1.0;
    for (int k = 0; k < kDebyeOrders; ++k, sign = -sign) {
        double uk = debye_sum(kUFORB, pw.tau, pw.nu, k);
        double vk = debye_sum(kVFORB, pw.tau, pw.nu, k);
        su_p += uk;
        sv_p += vk;
        su_m += sign * uk;
        sv_m += sign * vk;
    }

    ScaledCylinder out;
    out.E = nu * eta;
    out.J = su_p / std::sqrt(2.0 * kPi * nu * tanhmu);
    out.Y = -std::sqrt(2.0 / (kPi * nu * tanhmu)) * su_m;
    const double sinh2mu = 2.0 * std::sinh(mu) * std::cosh(mu);
    out.Jp = std::sqrt(sinh2mu / (4.0 * kPi * nu)) * sv_p;
    out.Yp = std::sqrt(sinh2mu / (kPi * nu)) * sv_m;
    return out;
}

// ---------------------------------------------------------------------------
// Region C2: Steed's method. CF1 gives f = J'_ν/J_ν; a downward (J,J')
// recurrence moves to order μ ≈ x where the complex fraction CF2 gives
// p + iq = (J'+iY')/(J+iY); the Wronskian fixes normalization; Y recurses up.
// ---------------------------------------------------------------------------
CylinderPair steed(double nu, double x) {
    constexpr int kMaxIter = 100000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-290;

    // CF1 by modified Lentz:  f = ν/x − 1/( 2(ν+1)/x − 1/( 2(ν+2)/x − … ) )
    double f = nu / x;
    if (std::abs(f) < kTiny) f = kTiny;
    {
        double C = f, D = 0.0, b = 2.0 * (nu + 1.0) / x;
        bool ok = false;
        for (int i = 0; i < kMaxIter; ++i) {
            D = b - D;
            if (std::abs(D) < kTiny) D = kTiny;
            C = b - 1.0 / C;
            if (std::abs(C) < kTiny) C = kTiny;
            D = 1.0 / D;
            double delta = C * D;
            f *= delta;
            b += 2.0 / x;
            if (std::abs(delta - 1.0) < kEps) {
                ok = true;
                break;
            }
        }
        if (!ok) throw NumericalError("riccati_bessel: CF1 did not converge");
    }

    // Shift down to μ = ν − nl with μ ≈ x so CF2 converges quickly.
    const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
    const double mu = nu - nl;
    double Jr = kTiny, Jrp = f * kTiny;
    {
        double fact = nu / x;
        for (int l = 0; l < nl; ++l) {
            double Jt = fact * Jr + Jrp;
            fact -= 1.0 / x;
            Jrp = fact * Jt - Jr;
            Jr = Jt;
        }
        if (Jr == 0) Jr = kTiny;
    }
    const double fmu = Jrp / Jr;

    // CF2 by complex modified Lentz:
    //   p + iq = −1/(2x) + i + (i/x)·( a₁/(b₁ + a₂/(b₂ + …)) ),
    //   aₙ = (n−1/2)² − μ², bₙ = 2(x + n i).
    std::complex<double> pq;
    {
        const std::complex<double> i1(0.0, 1.0);
        std::complex<double> lead(-0.5 / x, 1.0);
        std::complex<double> C = lead, D = 0.0, h = lead;
        if (std::abs(C) == 0.0) C = kTiny;
        bool ok = false;
        for (int n = 1; n < kMaxIter; ++n) {
            double a = (n - 0.5) * (n - 0.5) - mu * mu;
            std::complex<double> scaled_a = (n == 1) ? i1 / x * a : std::complex<double>(a, 0.0);
            std::complex<double> b = 2.0 * std::complex<double>(x, static_cast<double>(n));
            D = b + scaled_a * D;
            if (std::abs(D) == 0.0) D = kTiny;
            C = b + scaled_a / C;
            if (std::abs(C) == 0.0) C = kTiny;
            D = 1.0 / D;
            std::complex<double> delta = C * D;
            h *= delta;
            if (std::abs(delta - 1.0) < kEps) {
                ok = true;
                break;
            }
        }
        if (!ok) throw NumericalError("riccati_bessel: CF2 did not converge");
        pq = h;
    }
    const double p = pq.real(), q = pq.imag();

    // Steed assembly at order μ:
    //   Y = G·J with G = (p − f_μ)/q;   J² = W/(q + G(p − f_μ)),  W = 2/(πx).
    const double W = 2.0 / (kPi * x);
    const double G = (p - fmu) / q;
    double Jmu = std::sqrt(W / (q + G * (p - fmu)));
    if (Jr < 0) Jmu = -Jmu;
    double Ymu = G * Jmu;
    double Ypmu = q * Jmu + p * Ymu;

    // Scale the downward ladder and recurse Y upward.
    CylinderPair out;
    const double scale = Jmu / Jr;
    out.J = kTiny * scale;
    out.Jp = f * out.J;
    double Yl = Ymu;
    double Ylm1 = 0;
    if (nl == 0) {
        out.Y = Ymu;
        out.Yp = Ypmu;
        return out;
    }
    // Y_{μ+1} = (μ/x) Y_μ − Y'_μ, then three-term recurrence upward.
    double Ynext = (mu / x) * Ymu - Ypmu;
    Ylm1 = Ymu;
    Yl = Ynext;
    for (int l = 1; l < nl; ++l) {
        double order = mu + l;
        double Yp1 = (2.0 * order / x) * Yl - Ylm1;
        Ylm1 = Yl;
        Yl = Yp1;
    }
    out.Y = Yl;
    out.Yp = Ylm1 - (nu / x) * Yl;
    return out;
}

// ---------------------------------------------------------------------------
// Region C1 (x < 5): ascending series for J_ν, J_{ν+1}; integral
// representations for Y_μ, Y_{μ+1} at μ = frac(ν), then upward recurrence.
// ---------------------------------------------------------------------------
double bessel_j_series(double nu, double x) {
    // J_ν(x) = (x/2)^ν Σ_k (−x²/4)^k / (k! Γ(ν+k+1))
    const double q = 0.25 * x * x;
    double log_pref = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(log_pref) * sum;
}

double bessel_y_integral(double nu, double x) {
    // DLMF 10.9.8:
    // Y_ν = (1/π)∫₀^π sin(x sinθ − νθ)dθ − (1/π)∫₀^∞ (e^{νt}+e^{−νt}cos νπ) e^{−x sinh t} dt
    auto osc = integrate([&](double th) { return std::sin(x * std::sin(th) - nu * th); }, 0.0,
                         kPi, 1e-14, 1e-13);
    auto tail = integrate_to_infinity(
        [&](double t) {
            double sh = std::sinh(t);
            double e = -x * sh;
            if (e < -700.0) return 0.0;
            return (std::exp(nu * t) + std::exp(-nu * t) * std::cos(nu * kPi)) * std::exp(e);
        },
        0.0, 1e-14, 1e-13);
    return (osc.value - tail.value) / kPi;
}

CylinderPair series_small_x(double nu, double x) {
    CylinderPair out;
    const double Jnu = bessel_j_series(nu, x);
    const double Jnu1 = bessel_j_series(nu + 1.0, x);
    out.J = Jnu;
    out.Jp = (nu / x) * Jnu - Jnu1;
    // Y at fractional order, then upward recurrence; ends with (Y_ν, Y_{ν+1}).
    int nl = static_cast<int>(std::floor(nu));
    double mu = nu - nl;
    double Ym = bessel_y_integral(mu, x);
    double Ym1 = bessel_y_integral(mu + 1.0, x);
    for (int l = 1; l <= nl; ++l) {
        double order = mu + l;
        double Yn = (2.0 * order / x) * Ym1 - Ym;
        Ym = Ym1;
        Ym1 = Yn;
    }
    out.Y = Ym;
    out.Yp = (nu / x) * Ym - Ym1;
    return out;
}

constexpr double kStripWidth = 5.0;

bool in_oscillatory_debye(double nu, double x) {
    double width = kStripWidth * std::cbrt(std::max(nu, 1.0));
    return x >= 18.0 && x >= nu + width;
}

bool in_forbidden_debye(double nu, double x) {
    double width = kStripWidth * std::cbrt(nu);
    return nu >= 25.0 && x <= nu - width;
}

}  // namespace

CylinderPair cylinder_bessel(double nu, double x) {
    if (!(nu >= 0) || !(x > 0)) throw NumericalError("cylinder_bessel: need nu >= 0, x > 0");
    if (in_oscillatory_debye(nu, x)) return debye_oscillatory(nu, x);
    if (in_forbidden_debye(nu, x)) {
        ScaledCylinder s = debye_forbidden(nu, x);
        if (s.E > 650.0)
            throw NumericalError("cylinder_bessel: unscaled value would overflow; use riccati_bessel");
        CylinderPair out;
        out.J = s.J * std::exp(-s.E);
        out.Jp = s.Jp * std::exp(-s.E);
        out.Y = s.Y * std::exp(s.E);
        out.Yp = s.Yp * std::exp(s.E);
        return out;
    }
    if (x < 5.0) return series_small_x(nu, x);
    return steed(nu, x);
}

RiccatiPair riccati_bessel(double nu, double x) {
    if (!(nu >= 0) || !(x > 0)) throw NumericalError("riccati_bessel: need nu >= 0 and x > 0");
    const double pref = std::sqrt(0.5 * kPi * x);
    RiccatiPair out;
    if (in_forbidden_debye(nu, x)) {
        ScaledCylinder s = debye_forbidden(nu, x);
        out.log_scale = s.E;
        out.j = pref * s.J;
        out.n = -pref * s.Y;
        // d/dx[sqrt(πx/2) F] = sqrt(πx/2)(F' + F/(2x))
        out.jp = pref * (s.Jp + s.J / (2.0 * x));
        out.np = -pref * (s.Yp + s.Y / (2.0 * x));
        return out;
    }
    CylinderPair c = cylinder_bessel(nu, x);
    out.j = pref * c.J;
    out.n = -pref * c.Y;
    out.jp = pref * (c.Jp + c.J / (2.0 * x));
    out.np = -pref * (c.Yp + c.Y / (2.0 * x));
    return out;
}

}  // namespace sojourn
