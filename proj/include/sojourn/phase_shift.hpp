#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sojourn/potential.hpp"

namespace sojourn {

/// Dimension of the degree-ℓ spherical-harmonic space on S^{d−1}.
std::int64_t multiplicity(std::int64_t l, int d);

/// ν = ℓ + (d−2)/2, the exact radial order in dimension d.
inline double radial_order(std::int64_t l, int d) { return static_cast<double>(l) + 0.5 * (d - 2); }

struct PhaseShiftOptions {
    double match_tol = 1e-9;      ///< absolute accuracy target of the tail handling
    double ode_rel_tol = 1e-11;   ///< variable-phase RK tolerance
    double method_agreement = 1e-6;
    double wkb_start_suppression = 36.0;  ///< e-folds of 2∫κ at the inner start
    int numerov_points_per_wavelength = 64;  ///< floor; the error model may raise it
    double match_radius_override = 0;        ///< 0 → automatic policy
};

struct PhaseShiftResult {
    double delta = 0;          ///< method A (variable phase), continuous branch
    double delta_numerov = 0;  ///< method B, branch-aligned to A
    double method_diff = 0;
    double match_radius = 0;
    double tail_correction = 0;
};

/// Exact phase shift δ_{ℓ,h} for a central spec at E = 1 by two independent
/// methods: (A) variable-phase ODE from the origin-regular condition,
/// (B) Numerov outward integration matched to the free Riccati–Bessel pair.
/// Throws when the methods disagree beyond opts.method_agreement.
PhaseShiftResult phase_shift_exact(const PotentialSpec& spec, std::int64_t l, double h,
                                   const PhaseShiftOptions& opts = {});

/// Closed-form representation of the linearized-WKB phase
///   G_eik(b) = −(1/2)∫ V(sqrt(b²+t²)) dt
/// for the parametric potential family: pure powers coeff·b^{1−β} plus
/// log-oscillating terms b^{1−β}(a_s sin(log b) + a_c cos(log b)).
struct EikonalPhase {
    struct PowerTerm {
        double coeff, beta;
    };
    struct OscTerm {
        double amp_sin, amp_cos, beta;
    };
    std::vector<PowerTerm> powers;
    std::vector<OscTerm> oscs;

    double G(double b) const;
    bool empty() const { return powers.empty() && oscs.empty(); }
    /// Smallest decay exponent present (dominant term at large b).
    double beta_min() const;
    /// Σ|coefficients| at the dominant exponent.
    double dominant_coeff_bound() const;
};

EikonalPhase eikonal_phase_form(const PotentialSpec& spec);

/// Eikonal phase shift δ = G_eik(b)/(2h) at b = νh.
double phase_shift_eikonal(const PotentialSpec& spec, std::int64_t l, double h,
                           double b_min_valid = 2.0);

/// g_eik for a pure power law: G_eik(b) = g_eik·b^{1−α},
/// g_eik = −(c/2)·sqrt(π)·Γ((α−1)/2)/Γ(α/2).
double eikonal_g_coefficient(double strength, double alpha);

enum class ShiftMethod : std::uint8_t { exact, eikonal };

struct PhaseShiftEntry {
    std::int64_t l;
    double nu, b, delta;
    ShiftMethod method;
    std::int64_t mult;
};

/// Hybrid phase-shift table: exact entries for ℓ <= ℓ*, an implicit eikonal
/// range (ℓ*, ℓ_max] evaluated on demand, and a closed-form bound on
/// Σ mult·2|δ_eik| beyond ℓ_max.
struct PhaseShiftTable {
    double h = 0;
    int d = 2;
    double alpha = 0;
    std::vector<PhaseShiftEntry> exact;
    std::int64_t l_star = -1;  ///< last exact ℓ (−1: none)
    std::int64_t l_max = -1;   ///< last ℓ of the eikonal range
    EikonalPhase eik;
    double delta_floor = 0;
    double tail_bound = 0;         ///< Σ_{ℓ>ℓ_max} mult·2|δ_eik|
    double crossover_rel_err = 0;  ///< |δ_exact/δ_eik − 1| at ℓ*
    bool crossover_achieved = true;
    double max_method_diff = 0;    ///< worst A/B disagreement across exact entries

    double eikonal_delta(std::int64_t l) const { return eik.G(radial_order(l, d) * h) / (2.0 * h); }
    bool empty() const { return exact.empty() && l_max < 0; }
    std::int64_t atom_count() const;
};

struct BuildTableOptions {
    PhaseShiftOptions shift;
    double crossover_rel = 1e-4;  ///< |δ_exact − δ_eik| < crossover_rel·|δ| switches methods
    int crossover_window = 6;     ///< consecutive ℓ required
    double eikonal_b_min = 2.0;   ///< no crossover test below this b
    double delta_floor = 1e-9;
    std::int64_t l_cap = 200000;
    int workers = 0;  ///< 0 → hardware concurrency
};

PhaseShiftTable build_table(const PotentialSpec& spec, double h, int d,
                            const BuildTableOptions& opts = {});

/// Closed-form sums over the eikonal continuation from ℓ = from_l to infinity:
/// signed Σ mult·δ_eik (log-oscillating terms excluded, their envelope goes
/// into abs_bound) and the absolute bound Σ mult·|δ_eik|.
struct EikonalTailSums {
    double signed_sum = 0;
    double abs_bound = 0;
};
EikonalTailSums eikonal_delta_tail(const PhaseShiftTable& table, std::int64_t from_l);

/// Visit every (l, delta, mult) atom in ascending-ℓ order; eikonal entries are
/// generated on the fly and never materialized.
template <class F>
void for_each_atom(const PhaseShiftTable& table, F&& f) {
    for (const auto& e : table.exact) f(e.l, e.delta, e.mult);
    for (std::int64_t l = table.l_star + 1; l <= table.l_max; ++l)
        f(l, table.eikonal_delta(l), multiplicity(l, table.d));
}

}  // namespace sojourn
