#include "fiipnn/equilibrium.hpp"

#include "fiipnn/errors.hpp"
#include "fiipnn/projection.hpp"

#include <cmath>
#include <limits>

namespace fiipnn {

StateVector picard_map(const ValidatedSystem& sys, const Realization& real, const StateVector& s) {
    const SystemSpec& spec = *sys;
    if (s.x.size() != spec.n || s.y.size() != spec.m) {
        throw ValidationError("shape mismatch: state does not match system dimensions");
    }
    Vector vx = s.x - spec.rho * (real.A * s.x + real.Astar * s.y + spec.a);
    Vector vy = s.y - spec.lambda * (real.B * s.y + real.Bstar * s.x + spec.b);
    return {project_implicit(spec.shifts.H, spec.box1, s.x, vx),
            project_implicit(spec.shifts.L, spec.box2, s.y, vy)};
}

double residual(const ValidatedSystem& sys, const Realization& real, const Weights& w,
                const StateVector& s) {
    return weighted_norm(w, picard_map(sys, real, s) - s);
}

Equilibrium picard_solve(const ValidatedSystem& sys, const Realization& real, const Weights& w,
                         const PicardOptions& options) {
    if (!(options.tol > 0.0)) throw ValidationError("tolerance must be positive");
    check_realization(sys, real);

    const Certificate cert = certificate(sys, w);
    if (!cert.pass) {
        throw NumericalError("certificate fails for the given weights; contraction not guaranteed");
    }
    const double kappa = cert.kappa;

    Equilibrium eq;
    eq.kappa = kappa;
    StateVector z = options.initial ? *options.initial
                                    : StateVector{sys->box1.midpoint(), sys->box2.midpoint()};
    if (z.x.size() != sys.n() || z.y.size() != sys.m()) {
        throw ValidationError("shape mismatch: initial guess does not match system dimensions");
    }

    // kappa can be arbitrarily close to 0, in which case one step is exact.
    const double stop = kappa > 0.0 ? options.tol * (1.0 - kappa) / kappa
                                    : std::numeric_limits<double>::infinity();
    double first_step = 0.0;

    while (eq.iterations < options.max_iter) {
        StateVector next = picard_map(sys, real, z);
        if (!next.x.allFinite() || !next.y.allFinite()) {
            throw NumericalError("non-finite iterate in Picard solve", eq.iterations);
        }
        double step = weighted_norm(w, next - z);
        eq.step_norms.push_back(step);
        if (eq.iterations == 0) first_step = step;
        ++eq.iterations;
        z = std::move(next);
        if (step <= stop) {
            eq.converged = true;
            break;
        }
    }

    eq.a_priori_bound =
        std::pow(kappa, static_cast<double>(eq.iterations)) / (1.0 - kappa) * first_step;
    eq.residual = residual(sys, real, w, z);
    eq.point = std::move(z);
    return eq;
}

}  // namespace fiipnn
