#include "systems.hpp"

#include <fiipnn/certify.hpp>
#include <fiipnn/errors.hpp>
#include <fiipnn/fde.hpp>
#include <fiipnn/mlf.hpp>
#include <fiipnn/projection.hpp>
#include <fiipnn/scenarios.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace fiipnn;

namespace {

StateVector scalar_state(double x) { return {Vector::Constant(1, x), Vector(0)}; }

double decay_error(double alpha, std::size_t steps) {
    auto sys = validate_system(fixtures::decay_system(alpha));
    auto traj = integrate(sys, fixtures::exact_realization(sys.spec()), scalar_state(1.0), 1.0, steps);
    const double exact = mittag_leffler(alpha, -1.0);
    return std::abs(traj.states.back().x(0) - exact) / exact;
}

}  // namespace

TEST(Integrate, GridAndShape) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    auto real = sample_realization(sys, Selector::lower());
    auto z0 = builtin_initial_state(ScenarioName::example_4_1);
    auto traj = integrate(sys, real, z0, 2.0, 40);
    ASSERT_EQ(traj.times.size(), 41u);
    ASSERT_EQ(traj.states.size(), 41u);
    EXPECT_EQ(traj.times.front(), 0.0);
    EXPECT_DOUBLE_EQ(traj.times.back(), 2.0);
    EXPECT_EQ(traj.states.front().x, z0.x);
    EXPECT_EQ(traj.states.front().y, z0.y);
    EXPECT_DOUBLE_EQ(traj.step, 0.05);
    EXPECT_EQ(traj.alpha, 0.8);
    EXPECT_EQ(traj.realization.A, real.A);
}

TEST(Integrate, ConstantAtRest) {
    for (double alpha : {0.6, 1.0}) {
        auto sys = validate_system(fixtures::scalar_system(-3.0, 0.0, 10.0, alpha));
        auto traj = integrate(sys, fixtures::exact_realization(sys.spec()), scalar_state(3.0), 5.0, 200);
        for (const auto& s : traj.states) ASSERT_EQ(s.x(0), 3.0);
    }
}

TEST(Integrate, DecayMatchesMittagLeffler) {
    for (double alpha : {0.5, 0.8, 0.9, 1.0}) {
        const double e2000 = decay_error(alpha, 2000);
        const double e4000 = decay_error(alpha, 4000);
        EXPECT_LE(e2000, 1e-3) << alpha;
        EXPECT_LT(e4000, e2000) << alpha;
    }
}

TEST(Integrate, ConvergenceOrderAtLeastOne) {
    for (double alpha : {0.5, 0.8}) {
        const double e1 = decay_error(alpha, 250);
        const double e2 = decay_error(alpha, 500);
        const double e3 = decay_error(alpha, 1000);
        EXPECT_GT(std::log2(e1 / e2), 0.9) << alpha;
        EXPECT_GT(std::log2(e2 / e3), 0.9) << alpha;
    }
}

TEST(Integrate, AlphaOneIsHeun) {
    auto spec = builtin_scenario(ScenarioName::example_4_1);
    spec.alpha = 1.0;
    auto sys = validate_system(spec);
    auto real = sample_realization(sys, Selector::upper());
    const double t_end = 5.0;
    const std::size_t steps = 500;
    auto traj = integrate(sys, real, builtin_initial_state(ScenarioName::example_4_1), t_end, steps);
    const double h = t_end / steps;
    StateVector y = builtin_initial_state(ScenarioName::example_4_1);
    for (std::size_t k = 0; k < steps; ++k) {
        StateVector f0 = rhs(sys, real, y);
        StateVector pred{y.x + h * f0.x, y.y + h * f0.y};
        StateVector f1 = rhs(sys, real, pred);
        y = StateVector{y.x + 0.5 * h * (f0.x + f1.x), y.y + 0.5 * h * (f0.y + f1.y)};
        const auto& got = traj.states[k + 1];
        ASSERT_LE((got.x - y.x).cwiseAbs().maxCoeff(), 1e-8) << k;
        ASSERT_LE((got.y - y.y).cwiseAbs().maxCoeff(), 1e-8) << k;
    }
}

TEST(Integrate, TrajectoriesApproachEachOther) {
    for (auto name : {ScenarioName::example_4_1, ScenarioName::example_4_2}) {
        auto sys = validate_system(builtin_scenario(name));
        auto w = *builtin_weights(name);
        auto real = sample_realization(sys, Selector::random(4));
        auto z1 = builtin_initial_state(name);
        StateVector z2{-z1.x, -z1.y};
        auto t1 = integrate(sys, real, z1, 20.0, 2000);
        auto t2 = integrate(sys, real, z2, 20.0, 2000);
        EXPECT_LT(weighted_norm(w, t1.states.back() - t2.states.back()), weighted_norm(w, z1 - z2));
    }
}

TEST(Integrate, NonFiniteStateReportsStep) {
    const double inf = std::numeric_limits<double>::infinity();
    auto s = fixtures::scalar_system(0.0, -inf, inf, 0.7);
    s.rho = 1e300;
    auto sys = validate_system(s);
    try {
        integrate(sys, fixtures::exact_realization(s), scalar_state(1.0), 1.0, 100);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_GE(e.step(), 1u);
        EXPECT_LE(e.step(), 100u);
    }
}

TEST(Integrate, InvalidArguments) {
    auto sys = validate_system(fixtures::decay_system(0.5));
    auto real = fixtures::exact_realization(sys.spec());
    EXPECT_THROW(integrate(sys, real, scalar_state(1.0), 0.0, 10), ValidationError);
    EXPECT_THROW(integrate(sys, real, scalar_state(1.0), 1.0, 0), ValidationError);
    EXPECT_THROW(integrate(sys, real, StateVector{Vector::Zero(2), Vector(0)}, 1.0, 10), ValidationError);
}

TEST(Envelope, StartAtEquilibrium) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_2));
    auto w = *builtin_weights(ScenarioName::example_4_2);
    auto real = sample_realization(sys, Selector::lower());
    auto eq = picard_solve(sys, real, w, {.tol = 1e-14});
    auto traj = integrate(sys, real, eq.point, 20.0, 400);
    auto rep = envelope_check(traj, eq, w, certificate(sys, w).theta);
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.max_ratio, 0.0);
    EXPECT_EQ(rep.violations, 0u);
}

TEST(Envelope, Example41LowerVertex) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    auto w = Weights::unit(3, 2);
    auto real = sample_realization(sys, Selector::lower());
    auto eq = picard_solve(sys, real, w);
    auto traj = integrate(sys, real, builtin_initial_state(ScenarioName::example_4_1), 20.0, 4000);
    auto rep = envelope_check(traj, eq, w, certificate(sys, w).theta, 0.05);
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.max_ratio, 1.05);
    EXPECT_LT(rep.distance.back(), rep.v0);
    ASSERT_EQ(rep.envelope.size(), traj.times.size());
    EXPECT_DOUBLE_EQ(rep.envelope.front(), rep.v0);
}

TEST(Envelope, DetectsConstructedViolation) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    auto w = Weights::unit(3, 2);
    auto real = sample_realization(sys, Selector::lower());
    auto eq = picard_solve(sys, real, w);
    auto traj = integrate(sys, real, builtin_initial_state(ScenarioName::example_4_1), 20.0, 400);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] <= 1.0) continue;
        StateVector d = traj.states[k] - eq.point;
        traj.states[k] = eq.point + StateVector{10.0 * d.x, 10.0 * d.y};
    }
    auto rep = envelope_check(traj, eq, w, certificate(sys, w).theta);
    EXPECT_FALSE(rep.pass);
    EXPECT_GT(rep.violations, 0u);
    EXPECT_GT(rep.max_ratio, 1.05);
}

TEST(Envelope, FinalDistanceBelowInitial) {
    for (auto name : {ScenarioName::example_4_1, ScenarioName::example_4_2, ScenarioName::traffic_gstm}) {
        auto sys = validate_system(builtin_scenario(name));
        Weights w = builtin_weights(name) ? *builtin_weights(name) : *find_weights(sys);
        for (auto sel : {Selector::lower(), Selector::upper()}) {
            auto real = sample_realization(sys, sel);
            auto eq = picard_solve(sys, real, w);
            auto traj = integrate(sys, real, builtin_initial_state(name), 20.0, 1000);
            auto rep = envelope_check(traj, eq, w, certificate(sys, w).theta);
            EXPECT_LT(rep.distance.back(), rep.distance.front()) << to_string(name);
        }
    }
}

TEST(Envelope, MismatchedInputs) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_2));
    auto w = *builtin_weights(ScenarioName::example_4_2);
    auto real = sample_realization(sys, Selector::lower());
    auto eq = picard_solve(sys, real, w);
    auto traj = integrate(sys, real, builtin_initial_state(ScenarioName::example_4_2), 1.0, 10);
    traj.times.pop_back();
    EXPECT_THROW(envelope_check(traj, eq, w, 0.05), ValidationError);
    traj = integrate(sys, real, builtin_initial_state(ScenarioName::example_4_2), 1.0, 10);
    EXPECT_THROW(envelope_check(traj, eq, Weights::unit(3, 0), 0.05), ValidationError);
}
