#include "fiipnn/fde.hpp"

#include "fiipnn/errors.hpp"
#include "fiipnn/mlf.hpp"
#include "fiipnn/projection.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fiipnn {

namespace {

Vector stack(const StateVector& s) {
    Vector z(s.x.size() + s.y.size());
    z << s.x, s.y;
    return z;
}

StateVector unstack(const Vector& z, Index n) {
    return {z.head(n), z.tail(z.size() - n)};
}

[[noreturn]] void non_finite(std::size_t step) {
    std::ostringstream os;
    os << "non-finite state at step " << step;
    throw NumericalError(os.str(), step);
}

}  // namespace

Trajectory integrate(const ValidatedSystem& sys, const Realization& real, const StateVector& z0,
                     double t_end, std::size_t steps) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
    if (steps < 1) throw ValidationError("steps must be at least 1");
    if (z0.x.size() != sys.n() || z0.y.size() != sys.m()) {
        throw ValidationError("shape mismatch: initial state does not match system dimensions");
    }
    check_realization(sys, real);

    const Index n = sys.n();
    const double alpha = sys->alpha;
    const double h = t_end / static_cast<double>(steps);
    auto f = [&](const Vector& z) { return stack(rhs(sys, real, unstack(z, n))); };

    Trajectory traj;
    traj.alpha = alpha;
    traj.step = h;
    traj.realization = real;
    traj.times.resize(steps + 1);
    traj.states.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) traj.times[k] = static_cast<double>(k) * h;
    traj.states.push_back(z0);

    const Vector y0 = stack(z0);
    if (!y0.allFinite()) non_finite(0);

    if (alpha == 1.0) {
        Vector y = y0;
        Vector fy = f(y);
        for (std::size_t k = 0; k < steps; ++k) {
            Vector pred = y + h * fy;
            Vector fpred = f(pred);
            y = y + 0.5 * h * (fy + fpred);
            if (!y.allFinite()) non_finite(k + 1);
            fy = f(y);
            traj.states.push_back(unstack(y, n));
        }
        return traj;
    }

    // Product-integration weights of the Riemann-Liouville form
    //   y(t) = y0 + 1/Gamma(alpha) int_0^t (t - s)^(alpha - 1) f(y(s)) ds
    // with piecewise-constant (predictor) and piecewise-linear (corrector)
    // interpolation of f. Both depend only on the lag k - j, except the
    // corrector weight of j = 0.
    const double ha = std::pow(h, alpha);
    const double c_pred = ha * recip_gamma(alpha + 1.0);
    const double c_corr = ha * recip_gamma(alpha + 2.0);
    std::vector<double> pred_w(steps + 1);
    std::vector<double> corr_w(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double d = static_cast<double>(i);
        pred_w[i] = std::pow(d + 1.0, alpha) - std::pow(d, alpha);
        corr_w[i] = std::pow(d + 2.0, alpha + 1.0) + std::pow(d, alpha + 1.0) -
                    2.0 * std::pow(d + 1.0, alpha + 1.0);
    }

    const Index dim = y0.size();
    Matrix history(dim, static_cast<Index>(steps + 1));  // f(y_j) in column j
    history.col(0) = f(y0);

    Vector pred_sum(dim);
    Vector corr_sum(dim);
    for (std::size_t k = 0; k < steps; ++k) {
        const double dk = static_cast<double>(k);
        pred_sum.setZero();
        corr_sum = (std::pow(dk, alpha + 1.0) - (dk - alpha) * std::pow(dk + 1.0, alpha)) *
                   history.col(0);
        pred_sum += pred_w[k] * history.col(0);
        for (std::size_t j = 1; j <= k; ++j) {
            const auto fj = history.col(static_cast<Index>(j));
            pred_sum += pred_w[k - j] * fj;
            corr_sum += corr_w[k - j] * fj;
        }

        Vector pred = y0 + c_pred * pred_sum;
        if (!pred.allFinite()) non_finite(k + 1);
        Vector y = y0 + c_corr * (f(pred) + corr_sum);
        if (!y.allFinite()) non_finite(k + 1);

        history.col(static_cast<Index>(k + 1)) = f(y);
        traj.states.push_back(unstack(y, n));
    }
    return traj;
}

EnvelopeReport envelope_check(const Trajectory& traj, const Equilibrium& eq, const Weights& w,
                              double theta, double slack, double zero_tol) {
    if (traj.times.size() != traj.states.size() || traj.times.empty()) {
        throw ValidationError("mismatched grids: times and states differ in length");
    }
    if (!(slack >= 0.0)) throw ValidationError("slack must be nonnegative");
    const Index n = eq.point.x.size();
    const Index m = eq.point.y.size();
    if (w.mu.size() != n || w.tau.size() != m) {
        throw ValidationError("dimension mismatch: weights vs equilibrium");
    }
    for (const auto& s : traj.states) {
        if (s.x.size() != n || s.y.size() != m) {
            throw ValidationError("dimension mismatch: trajectory vs equilibrium");
        }
    }

    EnvelopeReport report;
    report.theta = theta;
    report.slack = slack;
    const std::size_t count = traj.states.size();
    report.distance.resize(count);
    report.envelope.resize(count);

    for (std::size_t k = 0; k < count; ++k) {
        report.distance[k] = weighted_norm(w, traj.states[k] - eq.point);
    }
    report.v0 = report.distance[0];

    const double limit = 1.0 + slack;
    for (std::size_t k = 0; k < count; ++k) {
        const double env = ml_envelope(traj.alpha, theta, report.v0, traj.times[k]);
        report.envelope[k] = env;
        const double v = report.distance[k];
        double ratio;
        if (v <= zero_tol) {
            ratio = 0.0;
        } else if (env > 0.0) {
            ratio = v / env;
        } else {
            ratio = std::numeric_limits<double>::infinity();
        }
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.worst_index = k;
        }
        if (ratio > limit) ++report.violations;
    }
    report.pass = report.violations == 0;
    return report;
}

}  // namespace fiipnn
