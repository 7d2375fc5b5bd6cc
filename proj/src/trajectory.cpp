#include "sojourn/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "sojourn/errors.hpp"
#include "sojourn/fitting.hpp"
#include "sojourn/quadrature.hpp"
#include "sojourn/rk.hpp"
#include "sojourn/roots.hpp"

namespace sojourn {
namespace {

constexpr double kPi = 3.14159265358979323846;

void require_normalized(const PotentialSpec& spec) {
    if (std::abs(spec.energy - 1.0) > 1e-12)
        throw ConfigError("trajectory routines require E = 1; apply normalize_energy first");
}

bool potential_is_zero(const PotentialSpec& spec) {
    return spec.strength == 0.0 && spec.corrections.empty();
}

Vec free_line_point(const Vec& omega, const Vec& eta, double sigma0, double t) {
    // incoming free asymptote in Hamiltonian time: x(t) = ω(2t + σ0) + η
    return omega * (2.0 * t + sigma0) + eta;
}

}  // namespace

Trajectory integrate_trajectory(const PotentialSpec& spec, const Vec& omega_in, const Vec& eta_in,
                                const IntegratorOptions& opts) {
    require_normalized(spec);
    const int d = spec.dimension;
    if (omega_in.dim() != d || eta_in.dim() != d)
        throw ConfigError("integrate_trajectory: direction/impact dimension mismatch");
    if (std::abs(norm(omega_in) - 1.0) > 1e-10)
        throw ConfigError("integrate_trajectory: omega_in must be a unit vector");
    if (std::abs(dot(omega_in, eta_in)) > 1e-10 * std::max(1.0, norm(eta_in)))
        throw ConfigError("integrate_trajectory: eta_in must be orthogonal to omega_in");

    const double R0 = opts.launch_radius;
    const double b = norm(eta_in);
    if (b > 0.5 * R0)
        throw ConfigError("integrate_trajectory: impact parameter exceeds R0/2; raise launch_radius");

    const double sigma0 = -std::sqrt(R0 * R0 - b * b);
    Trajectory traj;
    traj.omega_in = omega_in;
    traj.eta_in = eta_in;
    traj.sigma_in0 = sigma0;

    // Launch state: free-flight at t = 0 plus the first-order accumulated impulse
    // over (−∞, 0]:   Δξ = −∫∇V dt,   Δx = −2∫(−s)∇V ds.
    Vec x0 = free_line_point(omega_in, eta_in, sigma0, 0.0);
    Vec xi0 = omega_in;
    if (!potential_is_zero(spec)) {
        for (int j = 0; j < d; ++j) {
            auto dxi = integrate_from_minus_infinity(
                [&](double s) { return gradient(spec, free_line_point(omega_in, eta_in, sigma0, s))[j]; },
                0.0, 1e-14, 1e-11);
            auto dx = integrate_from_minus_infinity(
                [&](double s) {
                    return -s * gradient(spec, free_line_point(omega_in, eta_in, sigma0, s))[j];
                },
                0.0, 1e-14, 1e-11);
            xi0[j] -= dxi.value;
            x0[j] -= 2.0 * dx.value;
        }
        // Exact energy at launch.
        double v = evaluate(spec, x0);
        double scale = std::sqrt(std::max(1e-30, 1.0 - v) / dot(xi0, xi0));
        xi0 *= scale;
        // Incoming-tail part of the sojourn integral along the free asymptote.
        traj.phi_tail_in = integrate_from_minus_infinity(
                               [&](double s) {
                                   Vec xf = free_line_point(omega_in, eta_in, sigma0, s);
                                   return dot(xf, gradient(spec, xf));
                               },
                               0.0, 1e-14, 1e-11)
                               .value;
    }

    const int n = 2 * d + 1;
    double y[RungeKutta54::kMaxState];
    for (int j = 0; j < d; ++j) {
        y[j] = x0[j];
        y[d + j] = xi0[j];
    }
    y[2 * d] = 0.0;  // φ accumulator

    auto rhs = [&spec, d](double, const double* s, double* out) {
        Vec x(d), grad(d);
        for (int j = 0; j < d; ++j) x[j] = s[j];
        grad = gradient(spec, x);
        double xdotg = 0;
        for (int j = 0; j < d; ++j) {
            out[j] = 2.0 * s[d + j];
            out[d + j] = -grad[j];
            xdotg += s[j] * grad[j];
        }
        out[2 * d] = xdotg;
    };
    if (potential_is_zero(spec))
        rhs = [d](double, const double* s, double* out) {
            for (int j = 0; j < d; ++j) {
                out[j] = 2.0 * s[d + j];
                out[d + j] = 0.0;
            }
            out[2 * d] = 0.0;
        };

    RungeKutta54::Options ropts;
    ropts.rel_tol = opts.tol;
    ropts.abs_tol = opts.tol * 1e-2;
    ropts.initial_step = 1e-3;
    ropts.max_steps = opts.max_steps;
    RungeKutta54 rk(n, rhs, ropts);

    const double t_budget = (opts.max_arc_length > 0 ? opts.max_arc_length : 40.0 * R0) / 2.0;
    const bool central = spec.central();
    const double L0 = wedge_norm(x0, xi0);
    const double inner_guard = 10.0 * spec.r_min;

    traj.samples.push_back({0.0, x0, xi0});

    auto observer = [&](double t, const double* s) {
        Vec x(d), xi(d);
        for (int j = 0; j < d; ++j) {
            x[j] = s[j];
            xi[j] = s[d + j];
        }
        traj.samples.push_back({t, x, xi});
        double r = norm(x);
        if (r < inner_guard)
            throw NumericalError("trajectory entered forbidden inner region |x| < 10*r_min");
        double H = dot(xi, xi) + (potential_is_zero(spec) ? 0.0 : evaluate(spec, x));
        traj.energy_drift = std::max(traj.energy_drift, std::abs(H - 1.0));
        if (central && L0 > 1e-12) {
            double L = wedge_norm(x, xi);
            traj.angular_momentum_drift =
                std::max(traj.angular_momentum_drift, std::abs(L - L0) / L0);
        }
    };
    auto stop = [&](double t, const double* s) {
        (void)t;
        Vec x(d), xi(d);
        for (int j = 0; j < d; ++j) {
            x[j] = s[j];
            xi[j] = s[d + j];
        }
        return norm(x) >= R0 && dot(x, xi) > 0;
    };

    double t_end = rk.integrate(0.0, y, t_budget, stop, observer);
    Vec xe(d), xie(d);
    for (int j = 0; j < d; ++j) {
        xe[j] = y[j];
        xie[j] = y[d + j];
    }
    if (!(norm(xe) >= R0 && dot(xe, xie) > 0))
        throw NumericalError(
            "trajectory did not exit within the arc-length budget (trapping suspicion)");

    traj.phi_core = y[2 * d];
    traj.steps = rk.stats().steps;
    traj.max_error_estimate = rk.stats().max_error_estimate;

    if (!potential_is_zero(spec)) {
        // Outgoing tail along the exit asymptote x(t) = x_e + 2ξ_e (t − t_end).
        traj.phi_tail_out = integrate_to_infinity(
                                [&](double t) {
                                    Vec xf = xe + (2.0 * (t - t_end)) * xie;
                                    return dot(xf, gradient(spec, xf));
                                },
                                t_end, 1e-14, 1e-11)
                                .value;
    }
    return traj;
}

double sojourn_phi(const Trajectory& traj) {
    return traj.phi_core + traj.phi_tail_in + traj.phi_tail_out;
}

ScatterEvent extract_asymptotics(const Trajectory& traj, double residual_tol) {
    if (traj.samples.size() < 8) throw NumericalError("extract_asymptotics: too few samples");
    const int d = traj.omega_in.dim();

    // Outgoing branch: samples after the perihelion with |x| in the last decade.
    size_t imin = 0;
    double rmin = norm(traj.samples[0].x);
    for (size_t i = 1; i < traj.samples.size(); ++i) {
        double r = norm(traj.samples[i].x);
        if (r < rmin) {
            rmin = r;
            imin = i;
        }
    }
    const double R_exit = norm(traj.samples.back().x);
    std::vector<size_t> tail;
    for (size_t i = imin; i < traj.samples.size(); ++i)
        if (norm(traj.samples[i].x) >= 0.1 * R_exit) tail.push_back(i);
    if (tail.size() < 4) throw NumericalError("extract_asymptotics: outgoing tail too short");

    // Per-coordinate affine fit x_j(t) = A_j t + B_j.
    std::vector<double> ts;
    ts.reserve(tail.size());
    for (size_t i : tail) ts.push_back(traj.samples[i].t);
    Vec A(d), B(d);
    for (int j = 0; j < d; ++j) {
        std::vector<double> xs;
        xs.reserve(tail.size());
        for (size_t i : tail) xs.push_back(traj.samples[i].x[j]);
        LineFit lf = fit_line(ts, xs);
        A[j] = lf.slope;
        B[j] = lf.intercept;
    }
    double a = norm(A);
    Vec omega = normalized(A);
    Vec eta = B - dot(B, omega) * omega;

    ScatterEvent ev;
    ev.omega_in = traj.omega_in;
    ev.eta_in = traj.eta_in;
    ev.omega_out = omega;
    ev.eta_out = eta;
    ev.energy_drift = traj.energy_drift;
    ev.angular_momentum_drift = traj.angular_momentum_drift;
    ev.phi = sojourn_phi(traj);

    // τ against the incoming parametrization σ_in = 2t + σ0, outgoing slope
    // pinned to the exact asymptotic arclength rate 2 at E = 1.
    double sigma1 = 0;
    for (size_t i : tail) sigma1 += dot(traj.samples[i].x, omega) - 2.0 * traj.samples[i].t;
    sigma1 /= static_cast<double>(tail.size());
    ev.tau = traj.sigma_in0 - sigma1;

    double ss = 0;
    for (size_t i : tail) {
        Vec model = omega * (a * traj.samples[i].t + dot(B, omega)) + eta;
        Vec diff = traj.samples[i].x - model;
        ss += dot(diff, diff);
    }
    ev.fit_residual = std::sqrt(ss / tail.size()) / std::max(1.0, R_exit);
    if (ev.fit_residual > residual_tol)
        throw NumericalError("extract_asymptotics: fit residual above tolerance (raise R0)");
    return ev;
}

double turning_point_central(const PotentialSpec& spec, double eta) {
    require_normalized(spec);
    if (!spec.central()) throw ConfigError("turning_point_central: spec is not central");
    auto f = [&](double r) { return 1.0 - (eta * eta) / (r * r) - evaluate_central(spec, r); };
    double lo = std::max(eta, 20.0 * spec.r_min);
    if (f(lo) > 0) {
        // Attractive tail: the turning point sits below |η|; bracket downward.
        double hi = lo;
        while (f(lo) > 0) {
            hi = lo;
            lo *= 0.5;
            if (lo < 20.0 * spec.r_min)
                throw NumericalError("turning_point_central: no turning point above the origin guard");
        }
        return find_root_brent(f, lo, hi);
    }
    double hi = std::max(2.0 * lo, 2.0);
    while (f(hi) < 0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NumericalError("turning_point_central: no outer turning point");
    }
    double rm = find_root_brent(f, lo, hi);

    // Orbiting guard: the radial function must stay positive beyond r_m.
    for (double r = rm * 1.0001; r < rm * 1e4; r *= 1.25)
        if (f(r) <= 0)
            throw NumericalError("turning_point_central: multiple turning points (orbiting regime)");
    return rm;
}

double deflection_central(const PotentialSpec& spec, double eta, double quad_tol) {
    require_normalized(spec);
    if (!spec.central()) throw ConfigError("deflection_central: spec is not central");
    if (!(eta > 0)) throw ConfigError("deflection_central: need eta > 0");
    if (potential_is_zero(spec)) return 0.0;
    double rm = turning_point_central(spec, eta);

    // Σ = π − 2 ∫_{r_m}^∞ η dr / (r² sqrt(1 − η²/r² − V));  r = r_m / cos u
    // removes the inverse-square-root endpoint singularity.
    auto integrand = [&](double u) {
        double cu = std::cos(u);
        double r = rm / cu;
        double f = 1.0 - (eta * eta) / (r * r) - evaluate_central(spec, r);
        if (f <= 0) {
            // Roundoff at the turning point; the integrand limit there is finite.
            double fp = 2.0 * eta * eta / (rm * rm * rm) - radial_derivative_central(spec, rm);
            return eta * std::sqrt(2.0 / (fp * rm)) / rm;
        }
        return eta / (r * r * std::sqrt(f)) * rm * std::sin(u) / (cu * cu);
    };
    QuadResult q = integrate(integrand, 0.0, 0.5 * kPi, 0.5 * quad_tol, 1e-13);
    return kPi - 2.0 * q.value;
}

SojournFitReport fit_sojourn_asymptotics(const std::vector<ScatterEvent>& events, double alpha,
                                         double min_correlation) {
    if (events.size() < 5)
        throw ConfigError("fit_sojourn_asymptotics: need >= 5 events across the sweep");
    std::vector<double> b, dy, deta, phi, signed_dy;
    double bmax = 0, bmin = 1e300;
    for (const auto& ev : events) {
        double bb = norm(ev.eta_in);
        bmax = std::max(bmax, bb);
        bmin = std::min(bmin, bb);
    }
    if (bmax < 100.0 * bmin)
        throw ConfigError("fit_sojourn_asymptotics: |eta'| must span at least two decades");

    for (const auto& ev : events) {
        double bb = norm(ev.eta_in);
        Vec ehat = normalized(ev.eta_in);
        double shift = signed_angle_in_plane(ev.omega_in, ev.omega_out, ehat);
        Vec de = ev.eta_out - ev.eta_in;
        b.push_back(bb);
        signed_dy.push_back(shift);
        dy.push_back(std::abs(shift));
        deta.push_back(norm(de));
        phi.push_back(std::abs(ev.phi));
    }

    SojournFitReport rep;
    double floor = 1e-11;
    if (*std::max_element(dy.begin(), dy.end()) < floor &&
        *std::max_element(phi.begin(), phi.end()) < floor) {
        rep.sentinel = true;
        return rep;
    }

    PowerFit fy = fit_power_law(b, dy);
    PowerFit fe = fit_power_law(b, deta);
    PowerFit fp = fit_power_law(b, phi);
    rep.exponent_position = fy.exponent;
    rep.coeff_position = fy.coeff;
    rep.exponent_momentum = fe.exponent;
    rep.coeff_momentum = fe.coeff;
    rep.exponent_phi = fp.exponent;
    rep.coeff_phi = fp.coeff;
    rep.min_correlation = std::min({fy.r2, fe.r2, fp.r2});
    if (rep.min_correlation < min_correlation)
        throw NumericalError("fit_sojourn_asymptotics: correlation below threshold; sweep not asymptotic");

    // Signed leading coefficients from the top half-decade, where the known
    // next-order contamination O(b^{-alpha}) is smallest. The position pairing
    // (y−y′)·η scales the angular shift by b, so its coefficient sits at
    // b^{1−α} like φ's.
    double cutoff = bmax / std::sqrt(10.0);
    double sum_pos = 0, sum_phi = 0;
    int nsel = 0;
    for (size_t i = 0; i < b.size(); ++i) {
        if (b[i] < cutoff) continue;
        sum_pos += signed_dy[i] * std::pow(b[i], alpha);
        sum_phi += events[i].phi * std::pow(b[i], alpha - 1.0);
        ++nsel;
    }
    if (nsel > 0) {
        rep.signed_position_coeff = sum_pos / nsel;
        rep.signed_phi_coeff = sum_phi / nsel;
    }
    return rep;
}

ClassicalG classical_g(const PotentialSpec& spec, const Vec& omega_in, const Vec& eta_hat,
                       double b_lo, double b_hi, int count, const IntegratorOptions& opts,
                       double max_rel_error) {
    require_normalized(spec);
    std::vector<ScatterEvent> events;
    std::vector<double> bs;
    IntegratorOptions lopts = opts;
    lopts.launch_radius = std::max(opts.launch_radius, 4.0 * b_hi);
    for (int i = 0; i < count; ++i) {
        double bb = b_lo * std::pow(b_hi / b_lo, static_cast<double>(i) / (count - 1));
        bs.push_back(bb);
        Trajectory tr = integrate_trajectory(spec, omega_in, bb * eta_hat, lopts);
        events.push_back(extract_asymptotics(tr));
    }
    ClassicalG out;
    out.fits = fit_sojourn_asymptotics(events, spec.alpha);
    if (out.fits.sentinel) {
        out.g = 0.0;
        return out;
    }

    // g = coefficient of (y−y′)·η + coefficient of φ, both ~ b^{1−α}; average
    // the top half-decade samples and propagate their scatter.
    double cutoff = b_hi / std::sqrt(10.0);
    std::vector<double> gsamples;
    for (size_t i = 0; i < events.size(); ++i) {
        if (bs[i] < cutoff) continue;
        Vec ehat = normalized(events[i].eta_in);
        double shift = signed_angle_in_plane(events[i].omega_in, events[i].omega_out, ehat);
        double pairing = shift * bs[i];  // (y−y′)·η for the planar family
        double gi = (pairing + events[i].phi) * std::pow(bs[i], spec.alpha - 1.0);
        gsamples.push_back(gi);
    }
    double mean = 0;
    for (double v : gsamples) mean += v;
    mean /= gsamples.size();
    double var = 0;
    for (double v : gsamples) var += (v - mean) * (v - mean);
    var = gsamples.size() > 1 ? var / (gsamples.size() - 1) : 0.0;
    out.g = mean;
    out.relative_error = std::abs(mean) > 0 ? std::sqrt(var / gsamples.size()) / std::abs(mean) : 0.0;
    // Also include the systematic spread between the largest-b sample and the mean.
    if (!gsamples.empty()) {
        double sys = std::abs(gsamples.back() - mean) / std::max(1e-300, std::abs(mean));
        out.relative_error = std::max(out.relative_error, 0.5 * sys);
    }
    if (out.relative_error > max_rel_error)
        throw NumericalError("classical_g: propagated fit error above tolerance");
    return out;
}

}  // namespace sojourn
