#include "mafd/ma_ops.hpp"

#include <limits>
#include <stdexcept>

#include "mafd/point_matrix.hpp"

namespace mafd {

const char* to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::CentralDet: return "central";
        case SchemeKind::CompatibleSym: return "compatible-sym";
        case SchemeKind::CompatibleTranspose: return "compatible-transpose";
        case SchemeKind::CompatibleHat: return "compatible-hat";
    }
    return "?";
}

SchemeKind parse_scheme(const std::string& name) {
    if (name == "central") return SchemeKind::CentralDet;
    if (name == "compatible-sym") return SchemeKind::CompatibleSym;
    if (name == "compatible-transpose") return SchemeKind::CompatibleTranspose;
    if (name == "compatible-hat") return SchemeKind::CompatibleHat;
    throw std::invalid_argument("unknown scheme: " + name);
}

MeshFunction ma_central(const MeshFunction& u, const GridIndexSets& sets) {
    MeshFunction out(sets.grid);
    for (std::int64_t flat : sets.interior)
        out[flat] = mat_det(hessian_central_at(u, sets.grid.unflatten(flat)));
    return out;
}

namespace {

inline NodeIndex shifted(NodeIndex x, int axis, int by) {
    x[axis] += by;
    return x;
}

// Coefficient matrix of the divergence form at a node, per kind.
template <class V>
Mat coefficient_at(const V& u, const NodeIndex& y, SchemeKind kind) {
    switch (kind) {
        case SchemeKind::CompatibleSym:
            return mat_cof(mat_sym(hessian_ns_at(u, y)));
        case SchemeKind::CompatibleTranspose:
            return mat_transpose(mat_cof(hessian_ns_at(u, y)));
        case SchemeKind::CompatibleHat:
            return mat_cof(hessian_hat_at(u, y));
        default:
            throw std::logic_error("coefficient_at: not a divergence-form kind");
    }
}

// Flux component i at y: row i of K(u)(y) dotted with the forward gradient.
template <class V>
double flux_at(const V& u, const NodeIndex& y, int i, SchemeKind kind) {
    const int d = u.grid().dim;
    const double h = u.grid().h();
    const Mat K = coefficient_at(u, y, kind);
    double s = 0.0;
    for (int j = 0; j < d; ++j)
        s += K(i, j) * ((u.at(shifted(y, j, +1)) - u.at(y)) / h);
    return s;
}

template <class V>
MeshFunction ma_compatible_impl(const V& u, const GridIndexSets& sets, SchemeKind kind) {
    const Grid& g = sets.grid;
    const double h = g.h();
    MeshFunction out(g);
    for (std::int64_t flat : sets.interior) {
        const NodeIndex x = g.unflatten(flat);
        double div = 0.0;
        for (int i = 0; i < g.dim; ++i)
            div += (flux_at(u, x, i, kind) - flux_at(u, shifted(x, i, -1), i, kind)) / h;
        out[flat] = div / g.dim;
    }
    return out;
}

}  // namespace

MeshFunction ma_compatible(const MeshFunction& u, const GridIndexSets& sets, SchemeKind kind) {
    if (kind == SchemeKind::CentralDet)
        throw std::invalid_argument("ma_compatible: central kind is not divergence-form");
    if (kind == SchemeKind::CompatibleTranspose && sets.grid.dim != 2)
        throw std::invalid_argument("ma_compatible: transpose variant is 2D only");
    if (sets.grid.mode == GridMode::Full) {
        const GhostView view = ghost_extrapolate(u);
        return ma_compatible_impl(view, sets, kind);
    }
    return ma_compatible_impl(u, sets, kind);
}

MeshFunction ma_apply(const MeshFunction& u, const GridIndexSets& sets, SchemeKind kind) {
    if (kind == SchemeKind::CentralDet) return ma_central(u, sets);
    return ma_compatible(u, sets, kind);
}

MeshFunction residual(const MeshFunction& u, const MeshFunction& f, const GridIndexSets& sets,
                      SchemeKind kind) {
    if (!(u.grid() == f.grid()) || !(u.grid() == sets.grid))
        throw std::invalid_argument("residual: grid mismatch");
    MeshFunction r = ma_apply(u, sets, kind);
    for (std::int64_t flat : sets.interior) r[flat] -= f[flat];
    return r;
}

ConvexityReport convexity_report(const MeshFunction& u, const GridIndexSets& sets) {
    ConvexityReport rep;
    rep.min_eig_sym_ns = std::numeric_limits<double>::infinity();
    rep.min_eig_central = std::numeric_limits<double>::infinity();
    for (std::int64_t flat : sets.interior) {
        const NodeIndex x = sets.grid.unflatten(flat);
        const double l_ns = eig_minmax_sym(mat_sym(hessian_ns_at(u, x))).first;
        const double l_ce = eig_minmax_sym(hessian_central_at(u, x)).first;
        rep.min_eig_sym_ns = std::min(rep.min_eig_sym_ns, l_ns);
        rep.min_eig_central = std::min(rep.min_eig_central, l_ce);
    }
    rep.discrete_convex = rep.min_eig_sym_ns >= 0.0;
    rep.strictly_convex = rep.min_eig_sym_ns > 0.0;
    return rep;
}

}  // namespace mafd
