#include "fiipnn/model.hpp"

#include "fiipnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fiipnn {

namespace {

bool same_values(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) return false;
    return (lhs.array() == rhs.array()).all();
}

bool same_values(const Vector& lhs, const Vector& rhs) {
    if (lhs.size() != rhs.size()) return false;
    return (lhs.array() == rhs.array()).all();
}

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

void require_shape(const char* name, const Matrix& m, Index rows, Index cols) {
    if (m.rows() != rows || m.cols() != cols) {
        std::ostringstream os;
        os << "dimension mismatch: " << name << " is " << m.rows() << "x" << m.cols()
           << ", expected " << rows << "x" << cols;
        fail(os.str());
    }
}

void require_length(const char* name, const Vector& v, Index len) {
    if (v.size() != len) {
        std::ostringstream os;
        os << "dimension mismatch: " << name << " has length " << v.size() << ", expected "
           << len;
        fail(os.str());
    }
}

void require_finite(const char* name, const Matrix& m) {
    if (!m.allFinite()) fail(std::string("non-finite entry in ") + name);
}

void check_interval(const char* name, const IntervalMatrix& im, Index rows, Index cols) {
    require_shape((std::string(name) + ".lower").c_str(), im.lower, rows, cols);
    require_shape((std::string(name) + ".upper").c_str(), im.upper, rows, cols);
    require_finite(name, im.lower);
    require_finite(name, im.upper);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            if (im.lower(i, j) > im.upper(i, j)) {
                std::ostringstream os;
                os << "interval bound order: " << name << "[" << i << "][" << j << "] lower "
                   << im.lower(i, j) << " > upper " << im.upper(i, j);
                fail(os.str());
            }
        }
    }
}

void check_box(const char* name, const BoxSet& box, Index len) {
    require_length((std::string(name) + ".lo").c_str(), box.lo, len);
    require_length((std::string(name) + ".hi").c_str(), box.hi, len);
    // Infinite bounds are allowed; NaN is not.
    if (box.lo.array().isNaN().any() || box.hi.array().isNaN().any()) {
        fail(std::string("non-finite entry in ") + name);
    }
    for (Index i = 0; i < len; ++i) {
        if (box.lo(i) > box.hi(i)) {
            std::ostringstream os;
            os << "box bound order: " << name << "[" << i << "] lo " << box.lo(i) << " > hi "
               << box.hi(i);
            fail(os.str());
        }
    }
}

}  // namespace

bool IntervalMatrix::contains(const Matrix& m) const {
    if (m.rows() != rows() || m.cols() != cols()) return false;
    return (m.array() >= lower.array()).all() && (m.array() <= upper.array()).all();
}

bool BoxSet::contains(const Vector& v) const {
    if (v.size() != size()) return false;
    return (v.array() >= lo.array()).all() && (v.array() <= hi.array()).all();
}

StateVector operator-(const StateVector& lhs, const StateVector& rhs) {
    return {lhs.x - rhs.x, lhs.y - rhs.y};
}

StateVector operator+(const StateVector& lhs, const StateVector& rhs) {
    return {lhs.x + rhs.x, lhs.y + rhs.y};
}

double weighted_norm(const Weights& w, const StateVector& s) {
    return w.mu.dot(s.x.cwiseAbs()) + w.tau.dot(s.y.cwiseAbs());
}

bool operator==(const SystemSpec& lhs, const SystemSpec& rhs) {
    auto same_interval = [](const IntervalMatrix& l, const IntervalMatrix& r) {
        return same_values(l.lower, r.lower) && same_values(l.upper, r.upper);
    };
    auto same_box = [](const BoxSet& l, const BoxSet& r) {
        return same_values(l.lo, r.lo) && same_values(l.hi, r.hi);
    };
    bool gains_equal = lhs.gains.has_value() == rhs.gains.has_value() &&
                       (!lhs.gains || same_values(*lhs.gains, *rhs.gains));
    return lhs.n == rhs.n && lhs.m == rhs.m && lhs.alpha == rhs.alpha && lhs.rho == rhs.rho &&
           lhs.lambda == rhs.lambda && same_values(lhs.a, rhs.a) && same_values(lhs.b, rhs.b) &&
           same_interval(lhs.A, rhs.A) && same_interval(lhs.Astar, rhs.Astar) &&
           same_interval(lhs.B, rhs.B) && same_interval(lhs.Bstar, rhs.Bstar) &&
           same_values(lhs.shifts.H, rhs.shifts.H) && same_values(lhs.shifts.L, rhs.shifts.L) &&
           same_box(lhs.box1, rhs.box1) && same_box(lhs.box2, rhs.box2) && gains_equal;
}

Vector ValidatedSystem::gains() const {
    return spec_.gains ? *spec_.gains : Vector::Ones(spec_.n + spec_.m);
}

bool ValidatedSystem::has_nonunit_gains() const {
    return spec_.gains && (spec_.gains->array() != 1.0).any();
}

ValidatedSystem validate_system(const SystemSpec& spec) {
    const Index n = spec.n;
    const Index m = spec.m;
    if (n < 1) fail("dimension mismatch: n must be at least 1");
    if (m < 0) fail("dimension mismatch: m must be nonnegative");

    if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) fail("alpha outside (0,1]");
    if (!(spec.rho > 0.0) || !std::isfinite(spec.rho)) fail("nonpositive rho");
    if (m > 0 && (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))) {
        fail("nonpositive lambda");
    }

    require_length("a", spec.a, n);
    require_length("b", spec.b, m);
    if (!spec.a.allFinite()) fail("non-finite entry in a");
    if (!spec.b.allFinite()) fail("non-finite entry in b");

    check_interval("A", spec.A, n, n);
    check_interval("Astar", spec.Astar, n, m);
    check_interval("B", spec.B, m, m);
    check_interval("Bstar", spec.Bstar, m, n);

    require_shape("H", spec.shifts.H, n, n);
    require_shape("L", spec.shifts.L, m, m);
    require_finite("H", spec.shifts.H);
    require_finite("L", spec.shifts.L);

    check_box("box1", spec.box1, n);
    check_box("box2", spec.box2, m);

    if (spec.gains) {
        require_length("gains", *spec.gains, n + m);
        for (Index i = 0; i < spec.gains->size(); ++i) {
            double g = (*spec.gains)(i);
            if (!(g > 0.0) || !std::isfinite(g)) {
                std::ostringstream os;
                os << "nonpositive gain at index " << i;
                fail(os.str());
            }
        }
    }
    return ValidatedSystem(spec);
}

void check_realization(const ValidatedSystem& sys, const Realization& real) {
    const SystemSpec& s = *sys;
    require_shape("realization A", real.A, s.n, s.n);
    require_shape("realization Astar", real.Astar, s.n, s.m);
    require_shape("realization B", real.B, s.m, s.m);
    require_shape("realization Bstar", real.Bstar, s.m, s.n);
    if (!s.A.contains(real.A)) fail("realization outside interval: A");
    if (!s.Astar.contains(real.Astar)) fail("realization outside interval: Astar");
    if (!s.B.contains(real.B)) fail("realization outside interval: B");
    if (!s.Bstar.contains(real.Bstar)) fail("realization outside interval: Bstar");
}

Selector Selector::parse(std::string_view name, std::uint64_t seed) {
    if (name == "lower") return lower();
    if (name == "upper") return upper();
    if (name == "midpoint") return midpoint();
    if (name == "random") return random(seed);
    throw ValidationError("unknown selector: " + std::string(name));
}

std::string Selector::to_string() const {
    switch (kind) {
        case SelectorKind::lower: return "lower";
        case SelectorKind::upper: return "upper";
        case SelectorKind::midpoint: return "midpoint";
        case SelectorKind::random: return "random(" + std::to_string(seed) + ")";
    }
    return "?";
}

namespace detail {

Matrix sample_matrix(const IntervalMatrix& im, SelectorKind kind, std::mt19937_64& engine) {
    switch (kind) {
        case SelectorKind::lower: return im.lower;
        case SelectorKind::upper: return im.upper;
        case SelectorKind::midpoint: {
            // lo + (hi - lo) / 2 stays inside [lo, hi] and is exact when lo == hi.
            Matrix mid = im.lower + 0.5 * (im.upper - im.lower);
            return mid.cwiseMax(im.lower).cwiseMin(im.upper);
        }
        case SelectorKind::random: {
            Matrix out(im.rows(), im.cols());
            // Column-major fill keeps the draw order fixed.
            for (Index j = 0; j < im.cols(); ++j) {
                for (Index i = 0; i < im.rows(); ++i) {
                    double lo = im.lower(i, j);
                    double hi = im.upper(i, j);
                    double u = unit_uniform(engine);
                    out(i, j) = std::clamp(lo + u * (hi - lo), lo, hi);
                }
            }
            return out;
        }
    }
    return im.lower;
}

}  // namespace detail

Matrix sample_matrix(const IntervalMatrix& im, const Selector& selector) {
    std::mt19937_64 engine(selector.seed);
    return detail::sample_matrix(im, selector.kind, engine);
}

Realization sample_realization(const ValidatedSystem& sys, const Selector& selector) {
    std::mt19937_64 engine(selector.seed);
    Realization real;
    real.A = detail::sample_matrix(sys->A, selector.kind, engine);
    real.Astar = detail::sample_matrix(sys->Astar, selector.kind, engine);
    real.B = detail::sample_matrix(sys->B, selector.kind, engine);
    real.Bstar = detail::sample_matrix(sys->Bstar, selector.kind, engine);
    return real;
}

}  // namespace fiipnn
