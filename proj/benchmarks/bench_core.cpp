#include <fiipnn/certify.hpp>
#include <fiipnn/equilibrium.hpp>
#include <fiipnn/fde.hpp>
#include <fiipnn/mlf.hpp>
#include <fiipnn/scenarios.hpp>

#include <benchmark/benchmark.h>

using namespace fiipnn;

static void BM_MittagLeffler(benchmark::State& state) {
    const double alpha = static_cast<double>(state.range(0)) / 100.0;
    const double z = -static_cast<double>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(mittag_leffler(alpha, z));
}
BENCHMARK(BM_MittagLeffler)->ArgsProduct({{50, 80, 90, 99}, {0, 1, 5, 20}});

static void BM_Certificate(benchmark::State& state) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    const auto w = Weights::unit(3, 2);
    for (auto _ : state) benchmark::DoNotOptimize(certificate(sys, w).kappa);
}
BENCHMARK(BM_Certificate);

static void BM_FindWeights(benchmark::State& state) {
    auto sys = validate_system(builtin_scenario(ScenarioName::traffic_gstm));
    for (auto _ : state) benchmark::DoNotOptimize(find_weights(sys));
}
BENCHMARK(BM_FindWeights);

static void BM_PicardSolve(benchmark::State& state) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    const auto real = sample_realization(sys, Selector::lower());
    const auto w = Weights::unit(3, 2);
    for (auto _ : state) benchmark::DoNotOptimize(picard_solve(sys, real, w).iterations);
}
BENCHMARK(BM_PicardSolve);

// Quadratic in the step count because of the memory term.
static void BM_Integrate(benchmark::State& state) {
    auto sys = validate_system(builtin_scenario(ScenarioName::example_4_1));
    const auto real = sample_realization(sys, Selector::lower());
    const auto z0 = builtin_initial_state(ScenarioName::example_4_1);
    const auto steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(integrate(sys, real, z0, 20.0, steps).states.back().x(0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Integrate)->RangeMultiplier(2)->Range(500, 4000)->Unit(benchmark::kMillisecond)->Complexity();

BENCHMARK_MAIN();
