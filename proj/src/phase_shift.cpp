#include "sojourn/phase_shift.hpp"

#include <algorithm>
#include <cmath>

#include "sojourn/bessel.hpp"
#include "sojourn/errors.hpp"
#include "sojourn/parallel.hpp"
#include "sojourn/quadrature.hpp"
#include "sojourn/rk.hpp"
#include "sojourn/roots.hpp"
#include "sojourn/special.hpp"

namespace sojourn {
namespace {

constexpr double kPi = 3.14159265358979323846;

void require_central_normalized(const PotentialSpec& spec) {
    if (!spec.central()) throw ConfigError("partial waves require a central potential");
    if (std::abs(spec.energy - 1.0) > 1e-12)
        throw ConfigError("partial waves require E = 1; apply normalize_energy first");
}

bool potential_is_zero(const PotentialSpec& spec) {
    return spec.strength == 0.0 && spec.corrections.empty();
}

/// u'' = f(r) u with f = (V + h²(ν²−¼)/r² − 1)/h².
struct RadialProblem {
    const PotentialSpec* spec;
    double h, nu;
    double centrifugal;  // h²(ν²−¼)

    double Q(double r) const { return evaluate_central(*spec, r) + centrifugal / (r * r) - 1.0; }
    double f(double r) const { return Q(r) / (h * h); }
};

double effective_turning_point(const RadialProblem& rp) {
    const double guard = 20.0 * rp.spec->r_min;
    auto Q = [&](double r) { return rp.Q(r); };
    double hi = std::max(2.0 * std::sqrt(std::max(rp.centrifugal, 0.0)) + 2.0, 2.0);
    while (Q(hi) > 0) {
        hi *= 2.0;
        if (hi > 1e13) throw NumericalError("phase_shift: no classical turning point found");
    }
    double lo = hi;
    while (Q(lo) < 0) {
        lo *= 0.5;
        if (lo < guard)
            throw NumericalError(
                "phase_shift: effective potential has no forbidden region above the origin guard "
                "(attractive fall-to-center?)");
    }
    return find_root_brent(Q, lo, hi, 1e-13);
}

/// March inward from the turning point until 2∫κ dr reaches the suppression
/// budget; contributions from deeper in are below double precision.
double inner_start_radius(const RadialProblem& rp, double r_tp, double budget) {
    const double guard = 20.0 * rp.spec->r_min;
    double r = r_tp;
    double S2 = 0;
    while (S2 < budget) {
        double step = std::max(1e-3 * r, 1e-9);
        double rn = r - step;
        if (rn <= guard) return guard;
        double q1 = std::max(rp.Q(r), 0.0), q2 = std::max(rp.Q(rn), 0.0);
        S2 += (std::sqrt(q1) + std::sqrt(q2)) / rp.h * step;
        r = rn;
    }
    return r;
}

/// Matching radius: far enough that neglected second-order tail terms sit
/// below match_tol, inside the oscillatory Debye region, clear of the turning
/// point.
double matching_radius(const RadialProblem& rp, double r_tp, double match_tol) {
    double c_eff = rp.spec->v0_sup();
    for (const auto& t : rp.spec->corrections) c_eff += std::abs(t.amplitude);
    double alpha = rp.spec->alpha;
    double R_tail = std::pow(
        std::max(c_eff * c_eff / (4.0 * (2.0 * alpha - 1.0) * rp.h * match_tol), 1.0),
        1.0 / (2.0 * alpha - 1.0));
    double b = rp.h * rp.nu;
    double R_debye = rp.h * (rp.nu + 5.0 * std::cbrt(std::max(rp.nu, 1.0)) + 12.0);
    return std::max({R_tail, 1.3 * b, 1.25 * r_tp, R_debye, 19.0 * rp.h, 5.0});
}

struct TailCorrection {
    double mean = 0;
    double osc_cos = 0, osc_sin = 0;  // δ_tail = mean + osc_cos·cos2δ + osc_sin·sin2δ
};

/// First-order continuation of the variable-phase equation beyond R:
///   −(1/2h)∫_R^∞ V/sqrt(1−b²/r²) dr  −  (V(R)/4w)[2ĵn̂ cos2δ + (ĵ²−n̂²) sin2δ].
TailCorrection tail_correction(const RadialProblem& rp, double R) {
    TailCorrection tc;
    const double b = rp.h * rp.nu;
    tc.mean = -0.5 / rp.h *
              integrate_to_infinity(
                  [&](double r) {
                      double w2 = 1.0 - (b * b) / (r * r);
                      return evaluate_central(*rp.spec, r) / std::sqrt(std::max(w2, 1e-14));
                  },
                  R, 1e-16, 1e-12)
                  .value;
    RiccatiPair rb = riccati_bessel(rp.nu, R / rp.h);
    double w = std::sqrt(std::max(1.0 - (b * b) / (R * R), 1e-14));
    double VR = evaluate_central(*rp.spec, R);
    tc.osc_cos = -(VR / (4.0 * w)) * (2.0 * rb.j * rb.n);
    tc.osc_sin = -(VR / (4.0 * w)) * (rb.j * rb.j - rb.n * rb.n);
    return tc;
}

double variable_phase(const RadialProblem& rp, double r_start, double R,
                      const PhaseShiftOptions& opts) {
    auto rhs = [&rp](double r, const double* y, double* dy) {
        RiccatiPair rb = riccati_bessel(rp.nu, r / rp.h);
        double s = std::sin(y[0]), c = std::cos(y[0]);
        double bracket = rb.log_scale == 0.0
                             ? rb.j * c - rb.n * s
                             : rb.j * c * std::exp(-rb.log_scale) -
                                   rb.n * s * std::exp(rb.log_scale);
        dy[0] = -(evaluate_central(*rp.spec, r) / rp.h) * bracket * bracket;
    };
    RungeKutta54::Options ropts;
    ropts.rel_tol = opts.ode_rel_tol;
    ropts.abs_tol = 1e-13;
    ropts.initial_step = 0.05 * rp.h;
    RungeKutta54 rk(1, rhs, ropts);
    double y[1] = {0.0};
    rk.integrate(r_start, y, R, [](double, const double*) { return false; },
                 [](double, const double*) {});
    return y[0];
}

/// Outward Numerov sweep over [r_start, R]; returns tan δ from a two-point
/// match a quarter wavelength below the end point.
double numerov_raw_tan(const RadialProblem& rp, double r_start, double R,
                       const PhaseShiftOptions& opts, double* r_end_out) {
    double phi_total = std::max((R - r_start) / rp.h, 1.0);
    double theta = std::pow(480.0 * (opts.method_agreement / 3.0) / phi_total, 0.25);
    theta = std::clamp(theta, 1e-3, 2.0 * kPi / opts.numerov_points_per_wavelength);
    const double dr = theta * rp.h;
    const long nsteps = static_cast<long>(std::ceil((R - r_start) / dr));
    if (nsteps < 16) throw NumericalError("numerov: integration range too short");
    const long quarter = std::max<long>(2, std::lround(0.5 * kPi / theta));

    const double dr2 = dr * dr;
    double r0 = r_start;
    double u0 = 1e-20;
    double kappa = std::sqrt(std::max(rp.Q(r0), 0.0)) / rp.h;
    double u1 = u0 * (1.0 + kappa * dr + 0.5 * kappa * kappa * dr2);
    double p0 = u0 * (1.0 - dr2 / 12.0 * rp.f(r0));
    double p1 = u1 * (1.0 - dr2 / 12.0 * rp.f(r0 + dr));
    double uc = u1, rc = r0 + dr;

    std::vector<double> ring(quarter + 1, 0.0);
    std::vector<double> ring_r(quarter + 1, 0.0);
    long ridx = 0;
    ring[0] = uc;
    ring_r[0] = rc;
    for (long i = 1; i < nsteps; ++i) {
        double pn = 2.0 * p1 - p0 + dr2 * rp.f(rc) * uc;
        double rn = rc + dr;
        double un = pn / (1.0 - dr2 / 12.0 * rp.f(rn));
        p0 = p1;
        p1 = pn;
        uc = un;
        rc = rn;
        ++ridx;
        ring[ridx % (quarter + 1)] = uc;
        ring_r[ridx % (quarter + 1)] = rc;
        if (std::abs(uc) > 1e250) {
            p0 *= 1e-250;
            p1 *= 1e-250;
            uc *= 1e-250;
            for (auto& v : ring) v *= 1e-250;
        }
    }
    long back = std::min(ridx, quarter);
    double u_a = ring[(ridx - back) % (quarter + 1)];
    double r_a = ring_r[(ridx - back) % (quarter + 1)];
    RiccatiPair A = riccati_bessel(rp.nu, r_a / rp.h);
    RiccatiPair B = riccati_bessel(rp.nu, rc / rp.h);
    if (A.log_scale != 0.0 || B.log_scale != 0.0)
        throw NumericalError("numerov: matching points not in the oscillatory region");
    double rho = u_a / uc;
    *r_end_out = rc;
    return (rho * B.j - A.j) / (rho * B.n - A.n);
}

}  // namespace

std::int64_t multiplicity(std::int64_t l, int d) {
    if (l < 0 || d < 2) throw ConfigError("multiplicity: need l >= 0, d >= 2");
    if (l == 0) return 1;
    if (d == 2) return 2;
    // (2ℓ+d−2)·C(ℓ+d−3, d−3)/(d−2)
    __int128 binom = 1;
    for (int i = 1; i <= d - 3; ++i) {
        binom = binom * (l + i);
        binom /= i;
    }
    __int128 result = static_cast<__int128>(2 * l + d - 2) * binom / (d - 2);
    if (result > static_cast<__int128>(9.0e15)) throw NumericalError("multiplicity: overflow");
    return static_cast<std::int64_t>(result);
}

PhaseShiftResult phase_shift_exact(const PotentialSpec& spec, std::int64_t l, double h,
                                   const PhaseShiftOptions& opts) {
    require_central_normalized(spec);
    if (!(h > 0)) throw ConfigError("phase_shift_exact: h must be positive");
    PhaseShiftResult out;
    if (potential_is_zero(spec)) return out;

    const double nu = radial_order(l, spec.dimension);
    RadialProblem rp{&spec, h, nu, h * h * (nu * nu - 0.25)};
    double r_tp = effective_turning_point(rp);
    double r_start = inner_start_radius(rp, r_tp, opts.wkb_start_suppression);
    double R = opts.match_radius_override > 0 ? opts.match_radius_override
                                              : matching_radius(rp, r_tp, opts.match_tol);
    out.match_radius = R;

    double delta_ode = variable_phase(rp, r_start, R, opts);
    TailCorrection tc = tail_correction(rp, R);
    double tail_a =
        tc.mean + tc.osc_cos * std::cos(2.0 * delta_ode) + tc.osc_sin * std::sin(2.0 * delta_ode);
    out.delta = delta_ode + tail_a;
    out.tail_correction = tail_a;

    double r_end = R;
    double tanb = numerov_raw_tan(rp, r_start, R, opts, &r_end);
    double base = std::atan(tanb);
    double delta_b = base + kPi * std::round((delta_ode - base) / kPi);
    TailCorrection tcb = (std::abs(r_end - R) < 1e-9) ? tc : tail_correction(rp, r_end);
    out.delta_numerov =
        delta_b + tcb.mean + tcb.osc_cos * std::cos(2.0 * delta_b) + tcb.osc_sin * std::sin(2.0 * delta_b);
    out.method_diff = std::abs(out.delta - out.delta_numerov);
    if (out.method_diff > opts.method_agreement)
        throw NumericalError("phase_shift_exact: methods disagree by " +
                             std::to_string(out.method_diff) + " rad at l=" + std::to_string(l));
    return out;
}

double EikonalPhase::G(double b) const {
    double g = 0;
    for (const auto& p : powers) g += p.coeff * std::pow(b, 1.0 - p.beta);
    if (!oscs.empty()) {
        double lb = std::log(b);
        double sn = std::sin(lb), cs = std::cos(lb);
        for (const auto& o : oscs) g += std::pow(b, 1.0 - o.beta) * (o.amp_sin * sn + o.amp_cos * cs);
    }
    return g;
}

double EikonalPhase::beta_min() const {
    double m = 1e300;
    for (const auto& p : powers) m = std::min(m, p.beta);
    for (const auto& o : oscs) m = std::min(m, o.beta);
    return m;
}

double EikonalPhase::dominant_coeff_bound() const {
    double bm = beta_min(), c = 0;
    for (const auto& p : powers)
        if (p.beta <= bm + 1e-12) c += std::abs(p.coeff);
    for (const auto& o : oscs)
        if (o.beta <= bm + 1e-12) c += std::hypot(o.amp_sin, o.amp_cos);
    return c;
}

double eikonal_g_coefficient(double strength, double alpha) {
    return -0.5 * strength * power_line_integral(alpha);
}

EikonalPhase eikonal_phase_form(const PotentialSpec& spec) {
    require_central_normalized(spec);
    EikonalPhase form;
    if (spec.strength != 0.0)
        form.powers.push_back({eikonal_g_coefficient(spec.strength, spec.alpha), spec.alpha});
    for (const auto& t : spec.corrections) {
        if (t.amplitude == 0.0) continue;
        double beta = spec.alpha + t.extra_decay;
        if (!t.log_oscillation) {
            form.powers.push_back({eikonal_g_coefficient(t.amplitude, beta), beta});
        } else {
            // −(A/2)∫(b²+u²)^{−β/2} sin(log sqrt(b²+u²)) du
            //   = −(A/2)·b^{1−β}·[sin(log b)·C1 + cos(log b)·C2],
            // C1 = 2∫₀^{π/2} cos^{β−2}θ cos(log cosθ) dθ, C2 = −2∫₀^{π/2} … sin(…) dθ.
            auto C1 = integrate(
                [&](double th) {
                    double c = std::cos(th);
                    return std::pow(c, beta - 2.0) * std::cos(std::log(c));
                },
                0.0, 0.5 * kPi - 1e-12, 1e-14, 1e-12);
            auto C2 = integrate(
                [&](double th) {
                    double c = std::cos(th);
                    return -std::pow(c, beta - 2.0) * std::sin(std::log(c));
                },
                0.0, 0.5 * kPi - 1e-12, 1e-14, 1e-12);
            double pref = -0.5 * t.amplitude;
            form.oscs.push_back({pref * 2.0 * C1.value, pref * 2.0 * C2.value, beta});
        }
    }
    return form;
}

double phase_shift_eikonal(const PotentialSpec& spec, std::int64_t l, double h,
                           double b_min_valid) {
    require_central_normalized(spec);
    if (potential_is_zero(spec)) return 0.0;
    double b = radial_order(l, spec.dimension) * h;
    if (b < b_min_valid)
        throw NumericalError("phase_shift_eikonal: b below the WKB validity floor");
    return eikonal_phase_form(spec).G(b) / (2.0 * h);
}

std::int64_t PhaseShiftTable::atom_count() const {
    std::int64_t n = 0;
    for (const auto& e : exact) n += e.mult;
    for (std::int64_t l = l_star + 1; l <= l_max; ++l) n += multiplicity(l, d);
    return n;
}

namespace {

/// mult(ℓ, d) expanded as a polynomial in ν = ℓ + (d−2)/2:
///   mult = (2ν/(d−2)) ∏_{i=1}^{d−3} (ν + i − (d−2)/2) / (d−3)!      (d >= 3)
/// For d = 2 the table carries mult(0)=1, mult(ℓ>0)=2; poly {2} plus an ℓ=0
/// adjustment handled by callers (the eikonal range never contains ℓ=0).
std::vector<double> multiplicity_poly_in_nu(int d) {
    if (d == 2) return {2.0};
    std::vector<double> poly = {0.0, 2.0 / (d - 2)};  // 2ν/(d−2)
    double fact = 1.0;
    for (int i = 1; i <= d - 3; ++i) {
        fact *= i;
        double root = i - 0.5 * (d - 2);
        std::vector<double> next(poly.size() + 1, 0.0);
        for (size_t j = 0; j < poly.size(); ++j) {
            next[j] += poly[j] * root;
            next[j + 1] += poly[j];
        }
        poly = next;
    }
    for (auto& c : poly) c /= fact;
    return poly;
}

/// Σ_{ν = a, a+1, …} P(ν)·ν^{1−β} via Hurwitz zeta per monomial.
double poly_power_tail(const std::vector<double>& poly, double beta, double a) {
    double s = 0;
    for (size_t m = 0; m < poly.size(); ++m) {
        if (poly[m] == 0.0) continue;
        double expo = beta - 1.0 - static_cast<double>(m);
        if (!(expo > 1.0))
            throw NumericalError("eikonal tail sum diverges (requires alpha > d)");
        s += poly[m] * hurwitz_zeta(expo, a);
    }
    return s;
}

}  // namespace

EikonalTailSums eikonal_delta_tail(const PhaseShiftTable& table, std::int64_t from_l) {
    EikonalTailSums out;
    if (table.eik.empty()) return out;
    const double h = table.h;
    const double nu0 = radial_order(from_l, table.d);
    std::vector<double> poly = multiplicity_poly_in_nu(table.d);
    for (const auto& p : table.eik.powers) {
        // Σ mult·coeff·(νh)^{1−β}/(2h)
        double base = p.coeff * std::pow(h, 1.0 - p.beta) / (2.0 * h);
        double t = base * poly_power_tail(poly, p.beta, nu0);
        out.signed_sum += t;
        out.abs_bound += std::abs(t);
    }
    for (const auto& o : table.eik.oscs) {
        // No closed form for the signed oscillating sum; bound by the envelope.
        double base = std::hypot(o.amp_sin, o.amp_cos) * std::pow(h, 1.0 - o.beta) / (2.0 * h);
        out.abs_bound += std::abs(base) * poly_power_tail(poly, o.beta, nu0);
    }
    return out;
}

PhaseShiftTable build_table(const PotentialSpec& spec, double h, int d,
                            const BuildTableOptions& opts) {
    require_central_normalized(spec);
    if (d != spec.dimension) throw ConfigError("build_table: dimension mismatch with spec");
    PhaseShiftTable table;
    table.h = h;
    table.d = d;
    table.alpha = spec.alpha;
    table.delta_floor = opts.delta_floor;
    if (potential_is_zero(spec)) return table;

    table.eik = eikonal_phase_form(spec);

    // Exact region with crossover search, computed in deterministic ℓ order
    // with a parallel chunk pipeline.
    const int chunk = 96;
    std::vector<PhaseShiftResult> results;
    std::int64_t l_begin = 0;
    int streak = 0;
    bool found = false;
    while (!found) {
        if (l_begin > opts.l_cap) {
            table.crossover_achieved = false;
            table.l_star = opts.l_cap;
            break;
        }
        std::int64_t n = std::min<std::int64_t>(chunk, opts.l_cap - l_begin + 1);
        results.assign(n, {});
        parallel_for(n, opts.workers, [&](std::int64_t i) {
            results[i] = phase_shift_exact(spec, l_begin + i, h, opts.shift);
        });
        for (std::int64_t i = 0; i < n && !found; ++i) {
            std::int64_t l = l_begin + i;
            double nu = radial_order(l, d);
            double b = nu * h;
            table.exact.push_back(
                {l, nu, b, results[i].delta, ShiftMethod::exact, multiplicity(l, d)});
            table.max_method_diff = std::max(table.max_method_diff, results[i].method_diff);
            if (b >= opts.eikonal_b_min) {
                double de = table.eik.G(b) / (2.0 * h);
                double rel = std::abs(results[i].delta - de) /
                             std::max(std::abs(results[i].delta), 1e-300);
                if (rel < opts.crossover_rel) {
                    ++streak;
                    if (streak >= opts.crossover_window) {
                        table.l_star = l;
                        table.crossover_rel_err = rel;
                        found = true;
                    }
                } else {
                    streak = 0;
                }
            }
        }
        l_begin += n;
    }
    if (!found && table.crossover_achieved) {
        // l_cap loop exit without crossover
        table.crossover_achieved = false;
        table.l_star = table.exact.empty() ? -1 : table.exact.back().l;
    }
    if (found)
        while (!table.exact.empty() && table.exact.back().l > table.l_star) table.exact.pop_back();

    // Eikonal range up to the δ floor (δ monotone in b for the dominant term).
    double bm = table.eik.beta_min();
    double cb = table.eik.dominant_coeff_bound();
    double b_max = std::pow(cb / (2.0 * h * opts.delta_floor), 1.0 / (bm - 1.0)) * 1.1;
    std::int64_t l_max = static_cast<std::int64_t>(std::floor(b_max / h - 0.5 * (d - 2)));
    table.l_max = std::max(table.l_star, l_max);

    EikonalTailSums tail = eikonal_delta_tail(table, table.l_max + 1);
    table.tail_bound = 2.0 * tail.abs_bound;
    return table;
}

}  // namespace sojourn
