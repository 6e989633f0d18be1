#include "fiipnn/projection.hpp"

#include "fiipnn/errors.hpp"

#include <algorithm>
#include <sstream>

namespace fiipnn {

Vector project_box(const BoxSet& box, const Vector& v) {
    if (v.size() != box.size() || box.hi.size() != box.size()) {
        std::ostringstream os;
        os << "length mismatch: vector of length " << v.size() << " projected onto box of size "
           << box.size();
        throw ValidationError(os.str());
    }
    Vector out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        // median(lo, v, hi) for lo <= hi
        out(i) = std::min(std::max(v(i), box.lo(i)), box.hi(i));
    }
    return out;
}

Vector project_implicit(const Matrix& shift, const BoxSet& box, const Vector& x,
                        const Vector& v) {
    if (shift.rows() != box.size() || shift.cols() != x.size() || v.size() != box.size()) {
        std::ostringstream os;
        os << "shape mismatch: shift " << shift.rows() << "x" << shift.cols() << ", box "
           << box.size() << ", x " << x.size() << ", v " << v.size();
        throw ValidationError(os.str());
    }
    Vector u = shift * x;
    return u + project_box(box, v - u);
}

StateVector rhs(const ValidatedSystem& sys, const Realization& real, const StateVector& s) {
    const SystemSpec& spec = *sys;
    if (s.x.size() != spec.n || s.y.size() != spec.m) {
        throw ValidationError("shape mismatch: state does not match system dimensions");
    }
    check_realization(sys, real);

    Vector vx = s.x - spec.rho * (real.A * s.x + real.Astar * s.y + spec.a);
    Vector vy = s.y - spec.lambda * (real.B * s.y + real.Bstar * s.x + spec.b);

    StateVector out;
    out.x = project_implicit(spec.shifts.H, spec.box1, s.x, vx) - s.x;
    out.y = project_implicit(spec.shifts.L, spec.box2, s.y, vy) - s.y;

    if (spec.gains) {
        const Vector& g = *spec.gains;
        out.x.array() *= g.head(spec.n).array();
        out.y.array() *= g.tail(spec.m).array();
    }
    return out;
}

}  // namespace fiipnn
