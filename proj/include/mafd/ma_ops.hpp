#pragma once

#include <string>

#include "mafd/fd_ops.hpp"
#include "mafd/grid.hpp"

namespace mafd {

/// Discretization of det D^2 u.
///
/// CentralDet:          det of the central 9-point Hessian.
/// CompatibleSym:       (1/d) div[(cof sym H_ns u) grad_fwd u].
/// CompatibleTranspose: (1/d) div[(cof H_ns u)^T grad_fwd u], 2D only.
/// CompatibleHat:       (1/d) div[(cof H_hat u) grad_fwd u].
enum class SchemeKind { CentralDet, CompatibleSym, CompatibleTranspose, CompatibleHat };

const char* to_string(SchemeKind kind);
SchemeKind parse_scheme(const std::string& name);  // throws on unknown name

/// det of the central discrete Hessian at each interior node; 0 on boundary.
MeshFunction ma_central(const MeshFunction& u, const GridIndexSets& sets);

/// Divergence-form operator at each interior node; 0 on boundary.
/// Full mode extends stencils past the box by quadratic ghost extrapolation;
/// interior mode never leaves the box.
MeshFunction ma_compatible(const MeshFunction& u, const GridIndexSets& sets, SchemeKind kind);

/// Dispatch on kind.
MeshFunction ma_apply(const MeshFunction& u, const GridIndexSets& sets, SchemeKind kind);

/// scheme(u) - f on interior nodes, 0 on boundary nodes.
/// Assumes u already carries its boundary values.
MeshFunction residual(const MeshFunction& u, const MeshFunction& f, const GridIndexSets& sets,
                      SchemeKind kind);

struct ConvexityReport {
    double min_eig_sym_ns;   // min over interior of lambda_1(sym H_ns u)
    double min_eig_central;  // min over interior of lambda_1(H_central u)
    bool discrete_convex;    // min_eig_sym_ns >= 0
    bool strictly_convex;    // min_eig_sym_ns > 0
};

ConvexityReport convexity_report(const MeshFunction& u, const GridIndexSets& sets);

}  // namespace mafd
