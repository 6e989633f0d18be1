#include "systems.hpp"

#include <fiipnn/equilibrium.hpp>
#include <fiipnn/errors.hpp>
#include <fiipnn/projection.hpp>
#include <fiipnn/scenarios.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace fiipnn;

TEST(Picard, ScalarFixedPoint) {
    // rho = 1/2 halves the distance to 3 each step.
    auto spec = fixtures::scalar_system(-3.0, 0.0, 10.0);
    spec.rho = 0.5;
    auto sys = validate_system(spec);
    auto real = fixtures::exact_realization(spec);
    auto eq = picard_solve(sys, real, Weights::unit(1, 0), {.tol = 1e-13});
    EXPECT_TRUE(eq.converged);
    EXPECT_NEAR(eq.point.x(0), 3.0, 1e-12);
    EXPECT_LE(eq.residual, 1e-13);
}

TEST(Picard, ZeroXiIsNotCertified) {
    // rho a = 1 gives xi = 0, outside the open interval.
    auto sys = validate_system(fixtures::scalar_system(-3.0, 0.0, 10.0));
    EXPECT_THROW(picard_solve(sys, fixtures::exact_realization(sys.spec()), Weights::unit(1, 0)), NumericalError);
}

TEST(Picard, ResidualExamples) {
    auto sys = validate_system(fixtures::scalar_system(-3.0, 0.0, 10.0));
    auto real = fixtures::exact_realization(sys.spec());
    StateVector zero{Vector::Zero(1), Vector(0)};
    EXPECT_EQ(residual(sys, real, Weights::unit(1, 0), zero), 3.0);
}

TEST(Picard, ResidualExample41ByHand) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    auto real = sample_realization(sys, Selector::lower());
    StateVector s = builtin_initial_state(ScenarioName::example_4_1);

    // scalar-by-scalar evaluation of F
    const auto& sp = sys.spec();
    double total = 0.0;
    for (Index i = 0; i < 3; ++i) {
        double v = s.x(i) - sp.rho * sp.a(i);
        double u = 0.0;
        for (Index j = 0; j < 3; ++j) {
            v -= sp.rho * real.A(i, j) * s.x(j);
            u += sp.shifts.H(i, j) * s.x(j);
        }
        for (Index j = 0; j < 2; ++j) v -= sp.rho * real.Astar(i, j) * s.y(j);
        const double f = u + std::clamp(v - u, sp.box1.lo(i), sp.box1.hi(i));
        total += std::abs(f - s.x(i));
    }
    for (Index j = 0; j < 2; ++j) {
        double v = s.y(j) - sp.lambda * sp.b(j);
        double u = 0.0;
        for (Index k = 0; k < 2; ++k) {
            v -= sp.lambda * real.B(j, k) * s.y(k);
            u += sp.shifts.L(j, k) * s.y(k);
        }
        for (Index i = 0; i < 3; ++i) v -= sp.lambda * real.Bstar(j, i) * s.x(i);
        const double f = u + std::clamp(v - u, sp.box2.lo(j), sp.box2.hi(j));
        total += std::abs(f - s.y(j));
    }
    const double r = residual(sys, real, Weights::unit(3, 2), s);
    EXPECT_GT(r, 0.0);
    EXPECT_NEAR(r, total, 1e-12);
}

TEST(Picard, Example42BothVertices) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_2));
    const Weights w = *builtin_weights(ScenarioName::example_4_2);
    for (auto sel : {Selector::lower(), Selector::upper()}) {
        auto real = sample_realization(sys, sel);
        auto eq = picard_solve(sys, real, w);
        EXPECT_TRUE(eq.converged);
        EXPECT_LT(eq.residual, 1e-10);
        EXPECT_DOUBLE_EQ(eq.kappa, 0.95);
        EXPECT_LE(eq.a_priori_bound, eq.step_norms.front() / (1.0 - eq.kappa));
    }
    auto eq = picard_solve(sys, sample_realization(sys, Selector::lower()), w);
    EXPECT_NEAR(eq.point.x(0), 1.4643, 1e-4);
    EXPECT_NEAR(eq.point.x(1), 0.5618, 1e-4);
}

TEST(Picard, StartAtFixedPoint) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_2));
    const Weights w = *builtin_weights(ScenarioName::example_4_2);
    auto real = sample_realization(sys, Selector::lower());
    auto eq = picard_solve(sys, real, w, {.tol = 1e-13});
    PicardOptions opt;
    opt.initial = eq.point;
    auto again = picard_solve(sys, real, w, opt);
    EXPECT_LE(again.iterations, 1u);
    EXPECT_LE(weighted_norm(w, again.point - eq.point), 1e-10);
}

TEST(Picard, LinearConvergenceRate) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    const Weights w = Weights::unit(3, 2);
    auto real = sample_realization(sys, Selector::random(3));
    PicardOptions opt;
    opt.initial = builtin_initial_state(ScenarioName::example_4_1);
    auto eq = picard_solve(sys, real, w, opt);
    ASSERT_GT(eq.step_norms.size(), 3u);
    for (std::size_t k = 1; k < eq.step_norms.size(); ++k) {
        if (eq.step_norms[k - 1] < 1e-13) break;
        ASSERT_LE(eq.step_norms[k], eq.kappa * eq.step_norms[k - 1] * (1.0 + 1e-9)) << "step " << k;
    }
}

TEST(Picard, WeightIndependence) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    auto found = *find_weights(sys);
    const double tol = 1e-10;
    for (auto sel : {Selector::lower(), Selector::upper(), Selector::random(17)}) {
        auto real = sample_realization(sys, sel);
        auto a = picard_solve(sys, real, Weights::unit(3, 2), {.tol = tol});
        auto b = picard_solve(sys, real, found, {.tol = tol});
        EXPECT_LE(weighted_norm(Weights::unit(3, 2), a.point - b.point), 2.0 * tol);
    }
}

TEST(Picard, ConsistentWithDynamics) {
    for (auto name : {ScenarioName::example_4_1, ScenarioName::example_4_2, ScenarioName::traffic_gstm}) {
        auto sys = validate_system(builtin_scenario(name));
        Weights w = builtin_weights(name) ? *builtin_weights(name) : *find_weights(sys);
        auto real = sample_realization(sys, Selector::midpoint());
        auto eq = picard_solve(sys, real, w);
        EXPECT_LE(weighted_norm(w, rhs(sys, real, eq.point)), 1e-10) << to_string(name);
    }
}

TEST(Picard, UniqueFromRandomStarts) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    const Weights w = Weights::unit(3, 2);
    const double tol = 1e-10;
    auto real = sample_realization(sys, Selector::upper());
    auto ref = picard_solve(sys, real, w, {.tol = tol});
    std::mt19937_64 rng(5);
    auto inflate = [&](const BoxSet& b, Index i) {
        const double mid = 0.5 * (b.lo(i) + b.hi(i));
        const double half = b.hi(i) - b.lo(i);
        return std::uniform_real_distribution<double>(mid - half, mid + half)(rng);
    };
    for (int k = 0; k < 10; ++k) {
        PicardOptions opt;
        opt.tol = tol;
        StateVector z0{Vector(3), Vector(2)};
        for (Index i = 0; i < 3; ++i) z0.x(i) = inflate(sys->box1, i);
        for (Index j = 0; j < 2; ++j) z0.y(j) = inflate(sys->box2, j);
        opt.initial = z0;
        auto eq = picard_solve(sys, real, w, opt);
        EXPECT_LE(weighted_norm(w, eq.point - ref.point), 2.0 * tol);
    }
}

TEST(Picard, FailingCertificateThrows) {
    auto s = fixtures::scalar_system(0.0, 0.0, 1.0);
    s.A = {Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 1.5)};
    auto sys = validate_system(s);
    auto real = sample_realization(sys, Selector::lower());
    EXPECT_THROW(picard_solve(sys, real, Weights::unit(1, 0)), NumericalError);
}

TEST(Picard, MaxIterReturnsUnconverged) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    auto real = sample_realization(sys, Selector::lower());
    PicardOptions opt;
    opt.max_iter = 3;
    opt.initial = builtin_initial_state(ScenarioName::example_4_1);
    auto eq = picard_solve(sys, real, Weights::unit(3, 2), opt);
    EXPECT_FALSE(eq.converged);
    EXPECT_EQ(eq.iterations, 3u);
}
