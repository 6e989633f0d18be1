#pragma once

#include "fiipnn/model.hpp"

namespace fiipnn {

/// Euclidean projection onto a box: componentwise median(lo, v, hi).
/// Throws ValidationError on length mismatch.
Vector project_box(const BoxSet& box, const Vector& v);

/// Projection of v onto the shifted box shift*x + box, evaluated as
/// u + P_box[v - u] with u = shift*x.
Vector project_implicit(const Matrix& shift, const BoxSet& box, const Vector& x,
                        const Vector& v);

/// Right-hand side of the network dynamics for one realization:
///
///   dx_i = g_i * (P_{K1(x)}[x - rho (A x + A* y + a)]_i - x_i)
///   dy_j = g_{n+j} * (P_{K2(y)}[y - lambda (B y + B* x + b)]_j - y_j)
///
/// where g are the system gains (all ones by default). The realization is
/// checked against the system's intervals.
StateVector rhs(const ValidatedSystem& sys, const Realization& real, const StateVector& s);

}  // namespace fiipnn
