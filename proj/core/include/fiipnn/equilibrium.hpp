#pragma once

#include "fiipnn/certify.hpp"
#include "fiipnn/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fiipnn {

/// The map whose fixed points are the equilibria of a realization:
///
///   F(x, y) = (P_{K1(x)}[x - rho (A x + A* y + a)], P_{K2(y)}[y - lambda (B y + B* x + b)])
///
/// Gains do not enter F.
StateVector picard_map(const ValidatedSystem& sys, const Realization& real, const StateVector& s);

/// ||F(s) - s||_{mu,tau}; zero exactly at the equilibrium.
double residual(const ValidatedSystem& sys, const Realization& real, const Weights& w,
                const StateVector& s);

struct PicardOptions {
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    /// Defaults to the midpoints of box1 and box2.
    std::optional<StateVector> initial = std::nullopt;
};

struct Equilibrium {
    StateVector point;
    std::size_t iterations = 0;
    /// ||F(point) - point||_{mu,tau}
    double residual = 0.0;
    /// kappa^k / (1 - kappa) * ||z_1 - z_0||, bounds the distance of z_k to the fixed point.
    double a_priori_bound = 0.0;
    double kappa = 0.0;
    bool converged = false;
    /// ||z_{k+1} - z_k||_{mu,tau} for every iteration performed.
    std::vector<double> step_norms;
};

/// Picard iteration z_{k+1} = F(z_k). F is a kappa-contraction in ||.||_{mu,tau}
/// whenever the certificate for w passes, so stopping once
/// ||z_{k+1} - z_k|| <= tol (1 - kappa) / kappa puts z_{k+1} within tol of the
/// fixed point.
///
/// Throws NumericalError if the certificate for w fails. When max_iter is hit
/// the last iterate is returned with converged == false.
Equilibrium picard_solve(const ValidatedSystem& sys, const Realization& real, const Weights& w,
                         const PicardOptions& options = {});

}  // namespace fiipnn
