#pragma once

// Stability certificate for an interval network.
//
// With weights mu > 0, tau > 0 the Picard map of every realization is a
// contraction in ||z||_{mu,tau} = sum mu_i |x_i| + sum tau_j |y_j| with modulus
//
//   kappa = max(max_i xi_i, max_j zeta_j),
//
//   xi_i   = sum_{j != i} (mu_j / mu_i)(|h_ji| + at_ji) + sum_j (tau_j / mu_i) lambda bst_ji
//            + |h_ii| + 1 - rho alo_ii - h_ii
//   zeta_j = sum_{i != j} (tau_i / tau_j)(|l_ij| + bt_ij) + sum_i (mu_i / tau_j) rho ast_ij
//            + |l_jj| + 1 - lambda blo_jj - l_jj
//
// provided the diagonal conditions 1 - rho ahi_ii >= h_ii, 1 - lambda bhi_jj >= l_jj hold
// and every xi, zeta lies in (0, 1). The same numbers give the Mittag-Leffler
// decay rate theta = 1 - kappa.

#include "fiipnn/model.hpp"

#include <optional>

namespace fiipnn {

/// Worst-case absolute coefficients over the interval family.
struct TildeCoeffs {
    Matrix a_tilde;      // n x n: max |rho a_ji + h_ji| over [alo_ji, ahi_ji]
    Matrix astar_tilde;  // n x m: max |a*_ij|
    Matrix b_tilde;      // m x m: max |lambda b_ij + l_ij|
    Matrix bstar_tilde;  // m x n: max |b*_ji|
};

TildeCoeffs tilde_coeffs(const ValidatedSystem& sys);

struct Certificate {
    Vector a2_margins;  // 1 - rho ahi_ii - h_ii, must be >= 0
    Vector a3_margins;  // 1 - lambda bhi_jj - l_jj, must be >= 0
    Vector xi;
    Vector zeta;
    double kappa = 0.0;
    double theta = 0.0;
    /// min over all xi, zeta of min(v, 1 - v); positive iff the open-interval
    /// conditions hold.
    double min_slack = 0.0;
    bool pass = false;
    /// Set when the system carries non-unit gains, which the certificate ignores.
    bool gains_warning = false;
};

/// Throws ValidationError for non-positive weights or wrong lengths.
Certificate certificate(const ValidatedSystem& sys, const Weights& w);

/// The (n+m)x(n+m) comparison system behind weight search. xi_i < 1 for all i
/// (and likewise zeta) is equivalent to (D - C) w > 0 componentwise, where D
/// holds the diagonal terms rho alo_ii + h_ii - |h_ii| (resp. lambda blo_jj + l_jj - |l_jj|)
/// and C >= 0 the couplings that enter xi_i / zeta_j multiplied by the other weights.
struct ComparisonSystem {
    Vector diagonal;  // D
    Matrix coupling;  // C, zero diagonal, row k collects the terms of xi_k / zeta_k
    /// Spectral radius of D^{-1} C; infinity when some diagonal entry is <= 0.
    double spectral_radius = 0.0;
};

ComparisonSystem comparison_system(const ValidatedSystem& sys);

/// Decides the existential weight condition. Solves (D - C) w = 1 when D > 0 and
/// rho(D^{-1} C) < 1; returns the weights only if they are positive and the
/// resulting certificate passes.
std::optional<Weights> find_weights(const ValidatedSystem& sys);

}  // namespace fiipnn
