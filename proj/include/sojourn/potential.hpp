#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sojourn/vec.hpp"

namespace sojourn {

/// One closed-form correction term  A * r^{-(alpha+eps)} * {1 | sin(log r)}.
/// eps > 0 keeps the term inside the symbol class; eps = 0 is accepted by the
/// API (used to build counterexamples) but rejected by config validation.
struct CorrectionTerm {
    double amplitude = 0;
    double extra_decay = 0;
    bool log_oscillation = false;
};

/// Angular profile v0 on S^{d-1}. For d = 2 a Fourier series in the polar angle,
/// for d >= 3 a zonal Legendre series in u = x̂·e_d. Empty series means the
/// constant profile 1 (central potential).
struct AngularProfile {
    std::vector<double> cos_coeffs;  ///< d=2: a_k cos(kθ), k starting at 1
    std::vector<double> sin_coeffs;  ///< d=2: b_k sin(kθ)
    std::vector<double> zonal_coeffs;///< d>=3: c_k P_k(u), k starting at 1

    bool trivial() const { return cos_coeffs.empty() && sin_coeffs.empty() && zonal_coeffs.empty(); }
};

/// V(x) = strength * v0(x̂) / |x|^alpha + W(x),  v0 = 1 + profile terms.
struct PotentialSpec {
    int dimension = 2;
    double alpha = 3.0;
    double strength = 1.0;
    AngularProfile profile;
    std::vector<CorrectionTerm> corrections;
    double energy = 1.0;
    double r_min = 1e-6;

    bool central() const { return profile.trivial(); }
    /// Upper bound on |v0| over the sphere (coefficient sums).
    double v0_sup() const;

    void validate(bool main_theorem_run = false) const;
};

double evaluate(const PotentialSpec& spec, const Vec& x);
Vec gradient(const PotentialSpec& spec, const Vec& x);

/// Radial part V(r) for central specs (profile must be trivial).
double evaluate_central(const PotentialSpec& spec, double r);
double radial_derivative_central(const PotentialSpec& spec, double r);

/// Scale to E = 1: V -> V/E, h -> h/sqrt(E).
struct NormalizedSpec {
    PotentialSpec spec;
    double h_prime;
};
NormalizedSpec normalize_energy(const PotentialSpec& spec, double h);

/// Log-log decay-rate check of the correction W and its radial derivatives.
struct DecayOrderReport {
    int order = 0;
    double fitted_exponent = 0;  ///< -inf sentinel when W vanishes identically
    double required_exponent = 0;
    bool pass = false;
};

struct DecayReport {
    std::vector<DecayOrderReport> orders;
    bool all_pass = true;
};

/// Fits |d^k W/dr^k| against r on the given radii (k = 0..max_order) and
/// checks the exponent against -(alpha + k) with the given slack per order.
DecayReport check_symbol_decay(const PotentialSpec& spec, const std::vector<double>& radii,
                               int max_order, double slack = 0.1);

}  // namespace sojourn
