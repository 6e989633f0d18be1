#pragma once

// Domain types for fractional-order interval implicit projection networks:
//
//   D^a x = P_{K1(x)}[x - rho (A x + A* y) - rho a] - x
//   D^a y = P_{K2(y)}[y - lambda (B y + B* x) - lambda b] - y
//
// with A, A*, B, B* ranging over elementwise interval families and
// K1(x) = H x + box1, K2(y) = L y + box2.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>

namespace fiipnn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Elementwise bound pair {M : lower <= M <= upper}.
struct IntervalMatrix {
    Matrix lower;
    Matrix upper;

    /// Zero-width interval around a single matrix.
    static IntervalMatrix exact(const Matrix& m) { return {m, m}; }

    Index rows() const { return lower.rows(); }
    Index cols() const { return lower.cols(); }

    Matrix midpoint() const { return 0.5 * (lower + upper); }
    bool contains(const Matrix& m) const;
};

/// Axis-aligned box {v : lo <= v <= hi}.
struct BoxSet {
    Vector lo;
    Vector hi;

    Index size() const { return lo.size(); }
    Vector midpoint() const { return 0.5 * (lo + hi); }
    bool contains(const Vector& v) const;
};

/// Linear shifts of the constraint boxes: K1(x) = H x + box1, K2(y) = L y + box2.
struct ShiftMap {
    Matrix H;
    Matrix L;
};

/// Positive scaling weights mu (x-block) and tau (y-block).
struct Weights {
    Vector mu;
    Vector tau;

    static Weights unit(Index n, Index m) {
        return {Vector::Ones(n), Vector::Ones(m)};
    }
};

struct StateVector {
    Vector x;
    Vector y;
};

StateVector operator-(const StateVector& lhs, const StateVector& rhs);
StateVector operator+(const StateVector& lhs, const StateVector& rhs);

/// sum mu_i |x_i| + sum tau_j |y_j|
double weighted_norm(const Weights& w, const StateVector& s);

/// Full problem description. Plain aggregate; see validate_system.
struct SystemSpec {
    Index n = 0;
    Index m = 0;
    double alpha = 1.0;
    double rho = 1.0;
    double lambda = 1.0;  // unused when m == 0
    Vector a;
    Vector b;
    IntervalMatrix A;      // n x n
    IntervalMatrix Astar;  // n x m
    IntervalMatrix B;      // m x m
    IntervalMatrix Bstar;  // m x n
    ShiftMap shifts;
    BoxSet box1;
    BoxSet box2;
    /// Per-equation multipliers (length n + m) applied by the integrator only.
    std::optional<Vector> gains;
};

bool operator==(const SystemSpec& lhs, const SystemSpec& rhs);

/// A SystemSpec whose invariants have been checked. Only validate_system
/// produces one, so downstream code can rely on consistent shapes.
class ValidatedSystem {
public:
    const SystemSpec& spec() const noexcept { return spec_; }
    const SystemSpec& operator*() const noexcept { return spec_; }
    const SystemSpec* operator->() const noexcept { return &spec_; }

    Index n() const noexcept { return spec_.n; }
    Index m() const noexcept { return spec_.m; }

    /// Gains with the default (all ones) filled in.
    Vector gains() const;
    bool has_nonunit_gains() const;

private:
    explicit ValidatedSystem(SystemSpec spec) : spec_(std::move(spec)) {}
    friend ValidatedSystem validate_system(const SystemSpec& spec);

    SystemSpec spec_;
};

/// Checks every structural invariant and returns the same data.
/// Throws ValidationError naming the first violated constraint.
ValidatedSystem validate_system(const SystemSpec& spec);

/// One concrete member of the interval family.
struct Realization {
    Matrix A;
    Matrix Astar;
    Matrix B;
    Matrix Bstar;
};

/// Throws ValidationError if any matrix has the wrong shape or leaves its interval.
void check_realization(const ValidatedSystem& sys, const Realization& real);

enum class SelectorKind { lower, upper, midpoint, random };

/// How a concrete matrix is drawn from an interval family.
struct Selector {
    SelectorKind kind = SelectorKind::lower;
    std::uint64_t seed = 0;

    static Selector lower() { return {SelectorKind::lower, 0}; }
    static Selector upper() { return {SelectorKind::upper, 0}; }
    static Selector midpoint() { return {SelectorKind::midpoint, 0}; }
    static Selector random(std::uint64_t seed) { return {SelectorKind::random, seed}; }

    /// Accepts "lower", "upper", "midpoint" and "random"; the seed is taken
    /// from the argument for "random".
    static Selector parse(std::string_view name, std::uint64_t seed = 0);
    std::string to_string() const;
};

/// Entry-wise uniform draws for random selectors; deterministic given the seed.
Matrix sample_matrix(const IntervalMatrix& im, const Selector& selector);

/// Samples A, A*, B, B* with one selector. For random selectors a single
/// engine is advanced through the four matrices in that order.
Realization sample_realization(const ValidatedSystem& sys, const Selector& selector);

namespace detail {
/// Uniform draw in [0, 1) with 53 random bits; independent of the standard
/// library's distribution implementation.
inline double unit_uniform(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}
Matrix sample_matrix(const IntervalMatrix& im, SelectorKind kind, std::mt19937_64& engine);
}  // namespace detail

}  // namespace fiipnn
