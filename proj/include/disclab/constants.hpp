#pragma once

// Frozen calibration constants. The averaged-decay inequalities and the
// cover/Montgomery bounds come with implied constants that no closed form
// provides; each value below was measured once with tools/calibrate and is
// asserted against from then on. Bump the version when refreezing.

#include <string>

namespace disclab {

struct FrozenConstants {
    std::string version = "disclab-constants/1";

    // Validity thresholds of the averaged-decay lower bounds:
    // sector bound applies for |xi| >= sector_xi_min_mult / (theta*R),
    // global bound for |xi| >= global_xi_min_mult / R.
    double sector_xi_min_mult = 4.0;
    double global_xi_min_mult = 16.0;

    // Calibrated floors/spreads for the decay diagnostics. Measured sweeps
    // (tools/calibrate, theta in {pi/16, pi/8, pi/4}, R = 1/16): sector
    // spread <= 1.03, global min 0.01097, amplification min 0.9257.
    double sector_spread_max = 50.0;    // max/min of phi*theta*|xi|^3/R over a sector sweep
    double global_ratio_floor = 5e-3;   // min of phi*|xi|^4 over the global sweep
    double amplification_floor = 0.05;  // k in phi_{aR} >= k * a * phi_R at theta = pi/4

    // Cover counting-function bounds: Phi(m) <= cover_c1 * X/|m| for |m| >= Y,
    // Phi(m) <= cover_c2 * theta*X/Y everywhere. Measured maxima over
    // n in {2^12, 2^16, 2^20}, theta in {pi/8, pi/6}: 1.4999 and 1.4474.
    double cover_c1 = 2.0;
    double cover_c2 = 2.0;

    // Montgomery lower bound over a symmetric convex U:
    // sum_{m in U, |m|>B} |mu_hat(m)|^2 >= N*area(U)/4 - montgomery_c*N^2.
    // The calibration sweep (N <= 64, axis and rotated U) never needed a
    // positive c; 1.0 matches the exact axis-rectangle inequality's scale.
    double montgomery_c = 1.0;

    // Weight rho = rho_c * min(1/(theta X^3), 1/(theta X Y^3)) keeping
    // rho*Phi(m) <= phi(m) on enumerated covers; measured minimum of the
    // pointwise ratio is 0.00605 (n <= 4096, theta in {pi/8, pi/6}).
    double rho_c = 3e-3;

    // Comparison constants for cover feasibility: theta*X >= feasibility_aspect*Y
    // and theta*Y >= feasibility_scale.
    double feasibility_aspect = 1.0;
    double feasibility_scale = 1.0;

    // Float slack allowed on the exact Montgomery axis inequality, relative
    // to N*X1*X2.
    double montgomery_slack = 1e-9;
};

/// The frozen defaults compiled into this build.
inline const FrozenConstants& frozen_constants() {
    static const FrozenConstants fc{};
    return fc;
}

}  // namespace disclab
