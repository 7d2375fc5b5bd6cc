#pragma once

namespace sojourn {

/// Riccati–Bessel pair of order ν at x:
///   ĵ_ν(x) =  sqrt(πx/2) J_ν(x)   ~ sin(x − νπ/2 + π/4)
///   n̂_ν(x) = −sqrt(πx/2) Y_ν(x)   ~ cos(x − νπ/2 + π/4)
/// with Wronskian ĵ′n̂ − ĵn̂′ = 1. In the deeply classically forbidden region
/// the pair is returned scaled: true values are
///   ĵ = j·exp(−log_scale),  n̂ = n·exp(+log_scale)   (same for derivatives),
/// so mantissas stay O(1). log_scale = 0 in the oscillatory region.
struct RiccatiPair {
    double j = 0, n = 0;    ///< mantissas of ĵ, n̂
    double jp = 0, np = 0;  ///< mantissas of dĵ/dx, dn̂/dx
    double log_scale = 0;

    double wronskian() const { return jp * n - j * np; }
};

/// Evaluate the pair; relative accuracy ~1e-10 away from zeros.
/// Throws NumericalError for ν < 0 or x <= 0.
RiccatiPair riccati_bessel(double nu, double x);

/// Cylinder pair (J_ν, Y_ν and derivatives), unscaled; overflows in the deep
/// forbidden region are the caller's concern. Used mainly by tests.
struct CylinderPair {
    double J = 0, Y = 0, Jp = 0, Yp = 0;
};
CylinderPair cylinder_bessel(double nu, double x);

}  // namespace sojourn
