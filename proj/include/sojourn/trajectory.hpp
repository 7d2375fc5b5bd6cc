#pragma once

#include <vector>

#include "sojourn/potential.hpp"
#include "sojourn/vec.hpp"

namespace sojourn {

struct IntegratorOptions {
    double tol = 1e-10;        ///< local relative tolerance for the RK pair
    double launch_radius = 1e3;///< R0: |x| at launch and exit
    double max_arc_length = 0; ///< 0 → 40·R0; exceeded → trapping suspicion
    long max_steps = 20'000'000;
};

/// One sample of the Hamiltonian flow (time convention ẋ = 2ξ, ξ̇ = −∇V).
struct TrajectorySample {
    double t;
    Vec x, xi;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double energy = 1.0;
    double energy_drift = 0;           ///< max |H−E|/E over the run
    double angular_momentum_drift = 0; ///< max relative drift of |x∧ξ| (central specs)
    double phi_core = 0;     ///< ∫ x·∇V dt over the integrated arc
    double phi_tail_in = 0;  ///< analytic tail along the incoming asymptote
    double phi_tail_out = 0; ///< analytic tail along the outgoing asymptote
    double sigma_in0 = 0;    ///< incoming affine parameter at t=0 (arclength units)
    Vec omega_in, eta_in;
    long steps = 0;
    double max_error_estimate = 0;
};

struct ScatterEvent {
    Vec omega_in, eta_in;
    Vec omega_out, eta_out;
    double tau = 0;          ///< time delay, arclength convention (V=0 ⇒ 0)
    double phi = 0;          ///< sojourn integral ∫ x·∇V dt, tails included
    double fit_residual = 0; ///< rms residual of the outgoing affine fit
    double energy_drift = 0;
    double angular_momentum_drift = 0;
};

/// Integrate the flow from the incoming asymptote (ω′, η′) at |x| = R0 until
/// the outgoing branch reaches |x| >= R0 with x·ξ > 0. The launch state is the
/// free-flight state corrected to first order in V so the o(1) mismatch in the
/// incoming parametrization stays below ~R0^{1-α}·small.
Trajectory integrate_trajectory(const PotentialSpec& spec, const Vec& omega_in, const Vec& eta_in,
                                const IntegratorOptions& opts = {});

/// Affine fit of the outgoing tail x(t) ≈ ω·σ(t) + η over the last decade of
/// arc length; τ measured against the incoming parametrization.
ScatterEvent extract_asymptotics(const Trajectory& traj, double residual_tol = 1e-6);

/// φ = ∫ x·∇V dt with the analytic end corrections.
double sojourn_phi(const Trajectory& traj);

/// Central deflection angle Σ(η) by turning-point root-finding plus quadrature
/// with the r = r_m/cos u substitution. Positive for repulsive potentials.
double deflection_central(const PotentialSpec& spec, double eta, double quad_tol = 1e-10);

/// Outermost turning point: largest root of 1 − η²/r² − V(r).
double turning_point_central(const PotentialSpec& spec, double eta);

struct SojournFitReport {
    // log-log fits against |η′| of: |Δy| (angular position shift), |Δη| (vector
    // momentum shift from the identity map), |φ|.
    double exponent_position = 0, coeff_position = 0;      ///< expected −α
    double exponent_momentum = 0, coeff_momentum = 0;      ///< expected 1−α
    double exponent_phi = 0, coeff_phi = 0;                ///< expected 1−α
    double signed_position_coeff = 0;  ///< coefficient of (y−y′)·η ~ b^{1−α}
    double signed_phi_coeff = 0;       ///< coefficient of φ ~ b^{1−α}
    double min_correlation = 0;        ///< worst r² among the fits
    bool sentinel = false;             ///< all shifts below the residual floor (V=0)
};

/// Fit the large-|η′| asymptotics of Prop-type decay laws from a sweep of
/// events at fixed (ω′, η̂′) and geometrically increasing |η′|.
SojournFitReport fit_sojourn_asymptotics(const std::vector<ScatterEvent>& events,
                                         double alpha, double min_correlation = 0.999);

struct ClassicalG {
    double g = 0;
    double relative_error = 0;  ///< propagated fit error estimate
    SojournFitReport fits;
};

/// Leading phase coefficient g(ω′, η̂′): g·|η|^{1−α} is the sum of the
/// position-shift pairing (y−y′)·η and the sojourn value φ on the ray family.
/// Sweeps |η′| over [b_lo, b_hi] with `count` geometric samples.
ClassicalG classical_g(const PotentialSpec& spec, const Vec& omega_in, const Vec& eta_hat,
                       double b_lo = 10.0, double b_hi = 1000.0, int count = 9,
                       const IntegratorOptions& opts = {}, double max_rel_error = 0.02);

}  // namespace sojourn
