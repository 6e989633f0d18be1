#include "fiipnn/certify.hpp"

#include "fiipnn/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fiipnn {

namespace {

double abs_max(double lo, double hi) { return std::max(std::abs(lo), std::abs(hi)); }

void check_weights(const ValidatedSystem& sys, const Weights& w) {
    if (w.mu.size() != sys.n() || w.tau.size() != sys.m()) {
        throw ValidationError("weights have wrong length");
    }
    if (!((w.mu.array() > 0.0).all() && (w.tau.array() > 0.0).all()) || !w.mu.allFinite() ||
        !w.tau.allFinite()) {
        throw ValidationError("nonpositive weights");
    }
}

}  // namespace

TildeCoeffs tilde_coeffs(const ValidatedSystem& sys) {
    const SystemSpec& s = *sys;
    const Matrix& H = s.shifts.H;
    const Matrix& L = s.shifts.L;

    TildeCoeffs t;
    t.a_tilde.resize(s.n, s.n);
    for (Index i = 0; i < s.n; ++i) {
        for (Index j = 0; j < s.n; ++j) {
            t.a_tilde(i, j) = abs_max(s.rho * s.A.lower(i, j) + H(i, j),
                                      s.rho * s.A.upper(i, j) + H(i, j));
        }
    }
    t.astar_tilde.resize(s.n, s.m);
    for (Index i = 0; i < s.n; ++i) {
        for (Index j = 0; j < s.m; ++j) {
            t.astar_tilde(i, j) = abs_max(s.Astar.lower(i, j), s.Astar.upper(i, j));
        }
    }
    t.b_tilde.resize(s.m, s.m);
    for (Index i = 0; i < s.m; ++i) {
        for (Index j = 0; j < s.m; ++j) {
            t.b_tilde(i, j) = abs_max(s.lambda * s.B.lower(i, j) + L(i, j),
                                      s.lambda * s.B.upper(i, j) + L(i, j));
        }
    }
    t.bstar_tilde.resize(s.m, s.n);
    for (Index j = 0; j < s.m; ++j) {
        for (Index i = 0; i < s.n; ++i) {
            t.bstar_tilde(j, i) = abs_max(s.Bstar.lower(j, i), s.Bstar.upper(j, i));
        }
    }
    return t;
}

Certificate certificate(const ValidatedSystem& sys, const Weights& w) {
    check_weights(sys, w);
    const SystemSpec& s = *sys;
    const Matrix& H = s.shifts.H;
    const Matrix& L = s.shifts.L;
    const Vector& mu = w.mu;
    const Vector& tau = w.tau;
    const TildeCoeffs t = tilde_coeffs(sys);

    Certificate c;
    c.gains_warning = sys.has_nonunit_gains();

    c.a2_margins.resize(s.n);
    c.xi.resize(s.n);
    for (Index i = 0; i < s.n; ++i) {
        c.a2_margins(i) = 1.0 - s.rho * s.A.upper(i, i) - H(i, i);

        double off = 0.0;
        for (Index j = 0; j < s.n; ++j) {
            if (j == i) continue;
            off += mu(j) / mu(i) * (std::abs(H(j, i)) + t.a_tilde(j, i));
        }
        double cross = 0.0;
        for (Index j = 0; j < s.m; ++j) {
            cross += tau(j) / mu(i) * s.lambda * t.bstar_tilde(j, i);
        }
        c.xi(i) = off + cross + std::abs(H(i, i)) + 1.0 - s.rho * s.A.lower(i, i) - H(i, i);
    }

    c.a3_margins.resize(s.m);
    c.zeta.resize(s.m);
    for (Index j = 0; j < s.m; ++j) {
        c.a3_margins(j) = 1.0 - s.lambda * s.B.upper(j, j) - L(j, j);

        double off = 0.0;
        for (Index i = 0; i < s.m; ++i) {
            if (i == j) continue;
            off += tau(i) / tau(j) * (std::abs(L(i, j)) + t.b_tilde(i, j));
        }
        double cross = 0.0;
        for (Index i = 0; i < s.n; ++i) {
            cross += mu(i) / tau(j) * s.rho * t.astar_tilde(i, j);
        }
        c.zeta(j) = off + cross + std::abs(L(j, j)) + 1.0 - s.lambda * s.B.lower(j, j) - L(j, j);
    }

    c.kappa = c.xi.maxCoeff();
    if (s.m > 0) c.kappa = std::max(c.kappa, c.zeta.maxCoeff());
    c.theta = 1.0 - c.kappa;

    c.min_slack = std::numeric_limits<double>::infinity();
    bool open_ok = true;
    auto visit = [&](double v) {
        c.min_slack = std::min({c.min_slack, v, 1.0 - v});
        open_ok = open_ok && v > 0.0 && v < 1.0;
    };
    for (Index i = 0; i < s.n; ++i) visit(c.xi(i));
    for (Index j = 0; j < s.m; ++j) visit(c.zeta(j));

    bool margins_ok = (c.a2_margins.array() >= 0.0).all() && (c.a3_margins.array() >= 0.0).all();
    c.pass = margins_ok && open_ok;
    return c;
}

ComparisonSystem comparison_system(const ValidatedSystem& sys) {
    const SystemSpec& s = *sys;
    const Matrix& H = s.shifts.H;
    const Matrix& L = s.shifts.L;
    const TildeCoeffs t = tilde_coeffs(sys);
    const Index n = s.n;
    const Index m = s.m;

    ComparisonSystem cs;
    cs.diagonal.resize(n + m);
    cs.coupling = Matrix::Zero(n + m, n + m);

    for (Index i = 0; i < n; ++i) {
        cs.diagonal(i) = s.rho * s.A.lower(i, i) + H(i, i) - std::abs(H(i, i));
        for (Index j = 0; j < n; ++j) {
            if (j != i) cs.coupling(i, j) = std::abs(H(j, i)) + t.a_tilde(j, i);
        }
        for (Index j = 0; j < m; ++j) cs.coupling(i, n + j) = s.lambda * t.bstar_tilde(j, i);
    }
    for (Index j = 0; j < m; ++j) {
        cs.diagonal(n + j) = s.lambda * s.B.lower(j, j) + L(j, j) - std::abs(L(j, j));
        for (Index i = 0; i < m; ++i) {
            if (i != j) cs.coupling(n + j, n + i) = std::abs(L(i, j)) + t.b_tilde(i, j);
        }
        for (Index i = 0; i < n; ++i) cs.coupling(n + j, i) = s.rho * t.astar_tilde(i, j);
    }

    if ((cs.diagonal.array() <= 0.0).any()) {
        cs.spectral_radius = std::numeric_limits<double>::infinity();
        return cs;
    }
    Matrix scaled = cs.diagonal.cwiseInverse().asDiagonal() * cs.coupling;
    Eigen::EigenSolver<Matrix> solver(scaled, /*computeEigenvectors=*/false);
    cs.spectral_radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    return cs;
}

std::optional<Weights> find_weights(const ValidatedSystem& sys) {
    const ComparisonSystem cs = comparison_system(sys);
    if (!(cs.spectral_radius < 1.0)) return std::nullopt;

    const Index n = sys.n();
    const Index m = sys.m();
    Matrix system = Matrix(cs.diagonal.asDiagonal()) - cs.coupling;
    Vector w = system.partialPivLu().solve(Vector::Ones(n + m));
    if (!w.allFinite() || (w.array() <= 0.0).any()) return std::nullopt;

    Weights out{w.head(n), w.tail(m)};
    if (!certificate(sys, out).pass) return std::nullopt;
    return out;
}

}  // namespace fiipnn
