#include "systems.hpp"

#include <fiipnn/errors.hpp>
#include <fiipnn/scenarios.hpp>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <cmath>

using namespace fiipnn;
using ::testing::HasSubstr;

namespace {

std::string validation_message(const SystemSpec& s) {
    try {
        validate_system(s);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Validate, Example42IsValid) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_2));
    EXPECT_EQ(sys.n(), 2);
    EXPECT_EQ(sys.m(), 0);
    EXPECT_DOUBLE_EQ(sys->alpha, 0.9);
    EXPECT_DOUBLE_EQ(sys->rho, 0.25);
}

TEST(Validate, IntervalBoundOrder) {
    auto s = builtin_scenario(ScenarioName::example_4_2);
    s.A.lower(0, 0) = 5.0;
    s.A.upper(0, 0) = 4.0;
    EXPECT_THAT(validation_message(s), HasSubstr("interval bound order"));
    EXPECT_THAT(validation_message(s), HasSubstr("A[0][0]"));
}

TEST(Validate, BoxBoundOrder) {
    auto s = fixtures::scalar_system(0.0, 1.0, 0.0);
    EXPECT_THAT(validation_message(s), HasSubstr("box bound order"));
}

TEST(Validate, ParameterRanges) {
    auto s = fixtures::scalar_system(0.0, 0.0, 1.0);
    s.alpha = 0.0;
    EXPECT_THAT(validation_message(s), HasSubstr("alpha outside (0,1]"));
    s.alpha = 1.2;
    EXPECT_THAT(validation_message(s), HasSubstr("alpha"));
    s.alpha = 0.5;
    s.rho = 0.0;
    EXPECT_THAT(validation_message(s), HasSubstr("nonpositive rho"));
    s.rho = 1.0;
    s.gains = Vector::Constant(1, -1.0);
    EXPECT_THAT(validation_message(s), HasSubstr("nonpositive gain"));

    auto t = builtin_scenario(ScenarioName::example_4_1);
    t.lambda = -0.2;
    EXPECT_THAT(validation_message(t), HasSubstr("nonpositive lambda"));
}

TEST(Validate, DimensionMismatch) {
    auto s = builtin_scenario(ScenarioName::example_4_1);
    s.a = Vector::Zero(2);
    EXPECT_THAT(validation_message(s), HasSubstr("dimension mismatch"));
    s = builtin_scenario(ScenarioName::example_4_1);
    s.Bstar.upper = Matrix::Zero(3, 2);
    EXPECT_THAT(validation_message(s), HasSubstr("dimension mismatch"));
    s = builtin_scenario(ScenarioName::example_4_1);
    s.shifts.L = Matrix::Zero(3, 3);
    EXPECT_THAT(validation_message(s), HasSubstr("dimension mismatch"));
}

TEST(Validate, NonFinite) {
    auto s = builtin_scenario(ScenarioName::example_4_1);
    s.A.upper(1, 2) = std::nan("");
    EXPECT_THROW(validate_system(s), ValidationError);
    s = builtin_scenario(ScenarioName::example_4_1);
    s.box1.lo(0) = std::nan("");
    EXPECT_THROW(validate_system(s), ValidationError);
}

TEST(Validate, InfiniteBoxBoundsAllowed) {
    auto s = fixtures::scalar_system(0.0, -std::numeric_limits<double>::infinity(),
                                    std::numeric_limits<double>::infinity());
    EXPECT_NO_THROW(validate_system(s));
}

TEST(Validate, Idempotent) {
    for (auto name : {ScenarioName::example_4_1, ScenarioName::example_4_2, ScenarioName::traffic_gstm}) {
        auto once = validate_system(builtin_scenario(name));
        auto twice = validate_system(once.spec());
        EXPECT_TRUE(once.spec() == twice.spec());
    }
}

TEST(Validate, EmptyYBlock) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_2));
    EXPECT_EQ(sys->b.size(), 0);
    EXPECT_EQ(sys->B.rows(), 0);
    EXPECT_EQ(sys->Astar.cols(), 0);
    EXPECT_EQ(sys->Bstar.rows(), 0);
    EXPECT_EQ(sys->box2.size(), 0);
    EXPECT_EQ(sys.gains().size(), 2);
}

TEST(Validate, Gains) {
    auto s = traffic_system();
    EXPECT_FALSE(validate_system(s).has_nonunit_gains());
    TrafficParams p;
    p.gains = {1.0, 2.0, 1.0, 0.5};
    auto sys = validate_system(traffic_system(p));
    EXPECT_TRUE(sys.has_nonunit_gains());
    EXPECT_DOUBLE_EQ(sys.gains()(3), 0.5);
}

TEST(Selector, LowerOnExample42) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_2));
    Matrix expected(2, 2);
    expected << 3.7, -1.1, -1.8, 3.1;
    EXPECT_EQ(sample_matrix(sys->A, Selector::lower()), expected);
    Matrix upper(2, 2);
    upper << 4.6, 1.3, 3.8, 3.4;
    EXPECT_EQ(sample_matrix(sys->A, Selector::upper()), upper);
}

TEST(Selector, DegenerateInterval) {
    Matrix m(2, 3);
    m << 1.5, -2.0, 0.1, 7.0, 0.0, -3.3;
    auto im = IntervalMatrix::exact(m);
    for (auto sel : {Selector::lower(), Selector::upper(), Selector::midpoint(), Selector::random(9)}) {
        EXPECT_EQ(sample_matrix(im, sel), m) << sel.to_string();
    }
}

TEST(Selector, RandomInsideBounds) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Matrix b = sample_matrix(sys->B, Selector::random(seed));
        ASSERT_TRUE(sys->B.contains(b)) << "seed " << seed;
        Realization r = sample_realization(sys, Selector::random(seed));
        ASSERT_TRUE(sys->A.contains(r.A));
        ASSERT_TRUE(sys->Astar.contains(r.Astar));
        ASSERT_TRUE(sys->B.contains(r.B));
        ASSERT_TRUE(sys->Bstar.contains(r.Bstar));
    }
    EXPECT_TRUE(sys->B.contains(sample_matrix(sys->B, Selector::random(42))));
}

TEST(Selector, RandomIsDeterministicAndSeedDependent) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    auto r1 = sample_realization(sys, Selector::random(42));
    auto r2 = sample_realization(sys, Selector::random(42));
    auto r3 = sample_realization(sys, Selector::random(43));
    EXPECT_EQ(r1.A, r2.A);
    EXPECT_EQ(r1.Bstar, r2.Bstar);
    EXPECT_NE(r1.A, r3.A);
}

TEST(Selector, MidpointInside) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    auto r = sample_realization(sys, Selector::midpoint());
    EXPECT_TRUE(sys->A.contains(r.A));
    EXPECT_NEAR(r.A(0, 0), 2.75, 1e-15);
}

TEST(Selector, Parse) {
    EXPECT_EQ(Selector::parse("lower").kind, SelectorKind::lower);
    EXPECT_EQ(Selector::parse("random", 5).seed, 5u);
    EXPECT_EQ(Selector::parse("upper").to_string(), "upper");
    EXPECT_THROW(Selector::parse("vertex"), ValidationError);
}

TEST(Realization, OutsideIntervalRejected) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_2));
    Realization r = sample_realization(sys, Selector::lower());
    r.A(0, 0) = 3.0;
    EXPECT_THROW(check_realization(sys, r), ValidationError);
    r = sample_realization(sys, Selector::lower());
    r.A = Matrix::Zero(3, 3);
    EXPECT_THROW(check_realization(sys, r), ValidationError);
}

TEST(Norm, WeightedL1) {
    Weights w{Vector::Constant(2, 2.0), Vector::Constant(1, 3.0)};
    StateVector s{Vector::Zero(2), Vector::Zero(1)};
    s.x << 1.0, -2.0;
    s.y << -0.5;
    EXPECT_DOUBLE_EQ(weighted_norm(w, s), 2.0 + 4.0 + 1.5);
    StateVector d = s - s;
    EXPECT_EQ(weighted_norm(w, d), 0.0);
    EXPECT_DOUBLE_EQ(weighted_norm(w, s + s), 2.0 * weighted_norm(w, s));
}
