#pragma once

#include "fiipnn/model.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace fiipnn {

enum class ScenarioName { example_4_1, example_4_2, traffic_gstm };

/// "example-4.1", "example-4.2", "traffic-gstm". Throws ValidationError("unknown scenario: ...").
ScenarioName parse_scenario_name(std::string_view name);
std::string to_string(ScenarioName name);

/// Three-path, one-cost network tatonnement model. Path flows h_p form the
/// x-block and the origin-destination cost u the y-block:
///
///   D^a h_i = k_i (P[h_i - rho (sum_m l_m chi_mi C_m(h) - u)] - h_i)
///   D^a u   = e_1 (P[u - lambda (h_1 + h_2 + h_3 - r u)] - u)
///
/// with arc costs C_m(h) = l_m sum_i chi_mi h_i and incidence
/// p1 = {a1, a4}, p2 = {a2, a3, a4}, p3 = {a2, a5}.
///
/// The defaults are an illustrative choice, not measured data.
struct TrafficParams {
    std::array<double, 5> arc_cost_lower{2.7, 0.45, 1.8, 0.45, 2.7};
    std::array<double, 5> arc_cost_upper{3.3, 0.55, 2.2, 0.55, 3.3};
    double demand_lower = -3.0;
    double demand_upper = -2.5;
    double alpha = 0.85;
    double rho = 0.1;
    double lambda = 0.1;
    /// kappa_1..3 for the path equations, eta_1 for the cost equation.
    std::array<double, 4> gains{1.0, 1.0, 1.0, 1.0};
    double flow_shift = 0.05;  // H = flow_shift * I
    double cost_shift = 0.02;  // L = cost_shift
    double flow_lo = 0.5;
    double flow_hi = 8.0;
    double cost_lo = 1.0;
    double cost_hi = 30.0;
};

/// Arc-path incidence chi (5 arcs x 3 paths).
Matrix traffic_incidence();

SystemSpec traffic_system(const TrafficParams& params = {});

/// Exact data of a built-in scenario.
SystemSpec builtin_scenario(ScenarioName name);

/// Initial value used for the built-in scenario's trajectories.
StateVector builtin_initial_state(ScenarioName name);

/// Weights under which the built-in scenario is stated to be certified, if any.
std::optional<Weights> builtin_weights(ScenarioName name);

/// Spec-file document: system data plus optional weights and initial state.
struct SpecDocument {
    ValidatedSystem system;
    std::optional<Weights> weights;
    std::optional<StateVector> initial;
};

/// JSON spec file. Top-level fields: n, m, alpha, rho, lambda, a, b,
/// intervals {A, Astar, B, Bstar} each {lower, upper} as row-major nested
/// arrays, shifts {H, L}, boxes {box1: {lo, hi}, box2: {lo, hi}}, and optional
/// gains, weights {mu, tau}, initial {x, y}. Infinite box bounds are written
/// as the strings "inf" / "-inf".
std::string serialize(const SystemSpec& spec, const std::optional<Weights>& weights = std::nullopt,
                      const std::optional<StateVector>& initial = std::nullopt);

/// Parses and validates a spec document. Throws ParseError (with line/column
/// or field path) or ValidationError.
SpecDocument load_spec(std::istream& in);
SpecDocument load_spec(std::string_view text);

}  // namespace fiipnn
