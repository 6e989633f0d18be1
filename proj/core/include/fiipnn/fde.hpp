#pragma once

#include "fiipnn/equilibrium.hpp"
#include "fiipnn/model.hpp"

#include <cstddef>
#include <vector>

namespace fiipnn {

struct Trajectory {
    std::vector<double> times;          // uniform, times[0] == 0
    std::vector<StateVector> states;    // states[0] is the initial condition
    double alpha = 1.0;
    double step = 0.0;
    Realization realization;
};

/// Integrates the Caputo system D^alpha z = rhs(z) on [0, t_end] with `steps`
/// uniform steps using the fractional Adams-Bashforth-Moulton scheme
/// (one predictor, one corrector, full memory). For alpha == 1 the scheme is
/// the classical one-step pair: explicit Euler predictor, trapezoidal corrector.
///
/// Throws NumericalError carrying the step index if the state becomes non-finite.
Trajectory integrate(const ValidatedSystem& sys, const Realization& real, const StateVector& z0,
                     double t_end, std::size_t steps);

struct EnvelopeReport {
    double v0 = 0.0;
    double theta = 0.0;
    double slack = 0.0;
    /// max_k V(t_k) / (V(0) E_alpha(-theta t_k^alpha))
    double max_ratio = 0.0;
    std::size_t worst_index = 0;
    std::size_t violations = 0;
    bool pass = false;
    std::vector<double> distance;  // V(t_k) = ||z(t_k) - z*||_{mu,tau}
    std::vector<double> envelope;  // V(0) E_alpha(-theta t_k^alpha)
};

/// Checks V(t_k) <= (1 + slack) V(0) E_alpha(-theta t_k^alpha) on every grid point.
/// Distances at or below zero_tol count as zero (ratio 0), which covers
/// trajectories started at the equilibrium where the envelope vanishes.
EnvelopeReport envelope_check(const Trajectory& traj, const Equilibrium& eq, const Weights& w,
                              double theta, double slack = 0.05, double zero_tol = 1e-9);

}  // namespace fiipnn
