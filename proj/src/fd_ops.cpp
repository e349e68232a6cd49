#include "mafd/fd_ops.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mafd {

// ---------------------------------------------------------------------------
// Ghost extrapolation
// ---------------------------------------------------------------------------

double ghost_value(const MeshFunction& u, const NodeIndex& iv) {
    const Grid& g = u.grid();
    if (g.n < 2)
        throw std::invalid_argument("ghost_value: grid too small for 3-point extrapolation");

    int out_axis = -1;
    int steps = 0;  // 1 or 2 lattice steps outside, signed by face
    for (int k = 0; k < g.dim; ++k) {
        if (iv[k] < 0 || iv[k] > g.n) {
            assert(out_axis == -1 && "ghost node out of range along more than one axis");
            out_axis = k;
            steps = (iv[k] < 0) ? -iv[k] : iv[k] - g.n;
        }
    }
    if (out_axis == -1) return u.at(iv);
    assert(steps <= 2);

    // Quadratic through the three nodes nearest the face, evaluated
    // `steps` past it: p(1) = 3a - 3b + c, p(2) = 6a - 8b + 3c.
    NodeIndex b0 = iv, b1 = iv, b2 = iv;
    if (iv[out_axis] < 0) {
        b0[out_axis] = 0; b1[out_axis] = 1; b2[out_axis] = 2;
    } else {
        b0[out_axis] = g.n; b1[out_axis] = g.n - 1; b2[out_axis] = g.n - 2;
    }
    const double a = u.at(b0), b = u.at(b1), c = u.at(b2);
    return (steps == 1) ? 3.0 * a - 3.0 * b + c : 6.0 * a - 8.0 * b + 3.0 * c;
}

double GhostView::at(const NodeIndex& iv) const {
    return u_->grid().in_box(iv) ? u_->at(iv) : ghost_value(*u_, iv);
}

GhostView ghost_extrapolate(const MeshFunction& u) {
    if (u.grid().n < 2)
        throw std::invalid_argument("ghost_extrapolate: grid too small");
    return GhostView(u);
}

// ---------------------------------------------------------------------------
// Pointwise operators
// ---------------------------------------------------------------------------

namespace {

inline NodeIndex shifted(NodeIndex x, int axis, int by) {
    x[axis] += by;
    return x;
}

template <class V>
inline double fwd(const V& v, const NodeIndex& x, int axis, double h) {
    return (v.at(shifted(x, axis, +1)) - v.at(x)) / h;
}

template <class V>
inline double bwd(const V& v, const NodeIndex& x, int axis, double h) {
    return (v.at(x) - v.at(shifted(x, axis, -1))) / h;
}

// backward_j of forward_i, the common building block; on the diagonal this
// is the one-axis second difference.
template <class V>
inline double bwd_fwd(const V& v, const NodeIndex& x, int i, int j, double h) {
    return (fwd(v, x, i, h) - fwd(v, shifted(x, j, -1), i, h)) / h;
}

template <class V>
inline double bwd_bwd(const V& v, const NodeIndex& x, int i, int j, double h) {
    return (bwd(v, x, i, h) - bwd(v, shifted(x, j, -1), i, h)) / h;
}

template <class V>
Mat hessian_ns_impl(const V& v, const NodeIndex& x) {
    const int d = v.grid().dim;
    const double h = v.grid().h();
    Mat m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m(i, j) = bwd_fwd(v, x, i, j, h);
    return m;
}

template <class V>
Mat hessian_hat_impl(const V& v, const NodeIndex& x) {
    const int d = v.grid().dim;
    const double h = v.grid().h();
    Mat m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            const double e = bwd_bwd(v, x, i, j, h);
            m(i, j) = e;
            m(j, i) = e;
        }
    return m;
}

}  // namespace

double diff_forward_at(const MeshFunction& v, NodeIndex x, int axis) {
    return fwd(v, x, axis, v.grid().h());
}
double diff_backward_at(const MeshFunction& v, NodeIndex x, int axis) {
    return bwd(v, x, axis, v.grid().h());
}
double diff_central_at(const MeshFunction& v, NodeIndex x, int axis) {
    return (v.at(shifted(x, axis, +1)) - v.at(shifted(x, axis, -1))) / (2.0 * v.grid().h());
}
double diff_forward_at(const GhostView& v, NodeIndex x, int axis) {
    return fwd(v, x, axis, v.grid().h());
}
double diff_backward_at(const GhostView& v, NodeIndex x, int axis) {
    return bwd(v, x, axis, v.grid().h());
}

double second_diff_at(const MeshFunction& v, NodeIndex x, int axis) {
    return bwd_fwd(v, x, axis, axis, v.grid().h());
}

Mat hessian_ns_at(const MeshFunction& v, NodeIndex x) { return hessian_ns_impl(v, x); }
Mat hessian_ns_at(const GhostView& v, NodeIndex x) { return hessian_ns_impl(v, x); }
Mat hessian_hat_at(const MeshFunction& v, NodeIndex x) { return hessian_hat_impl(v, x); }
Mat hessian_hat_at(const GhostView& v, NodeIndex x) { return hessian_hat_impl(v, x); }

Mat hessian_central_at(const MeshFunction& v, NodeIndex x) {
    const int d = v.grid().dim;
    const double h = v.grid().h();
    Mat m(d);
    for (int i = 0; i < d; ++i) m(i, i) = bwd_fwd(v, x, i, i, h);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            NodeIndex pp = x, pm = x, mp = x, mm = x;
            pp[i] += 1; pp[j] += 1;
            pm[i] += 1; pm[j] -= 1;
            mp[i] -= 1; mp[j] += 1;
            mm[i] -= 1; mm[j] -= 1;
            const double e = (v.at(pp) - v.at(pm) - v.at(mp) + v.at(mm)) / (4.0 * h * h);
            m(i, j) = e;
            m(j, i) = e;
        }
    return m;
}

// ---------------------------------------------------------------------------
// Whole-field operators
// ---------------------------------------------------------------------------

MeshFunction diff_forward(const MeshFunction& v, int axis) {
    const Grid& g = v.grid();
    MeshFunction out(g);
    for (std::int64_t flat = 0; flat < g.num_nodes(); ++flat) {
        const NodeIndex x = g.unflatten(flat);
        if (x[axis] + 1 <= g.n) out[flat] = diff_forward_at(v, x, axis);
    }
    return out;
}

MeshFunction diff_backward(const MeshFunction& v, int axis) {
    const Grid& g = v.grid();
    MeshFunction out(g);
    for (std::int64_t flat = 0; flat < g.num_nodes(); ++flat) {
        const NodeIndex x = g.unflatten(flat);
        if (x[axis] - 1 >= 0) out[flat] = diff_backward_at(v, x, axis);
    }
    return out;
}

MeshFunction diff_central(const MeshFunction& v, int axis) {
    const Grid& g = v.grid();
    MeshFunction out(g);
    for (std::int64_t flat = 0; flat < g.num_nodes(); ++flat) {
        const NodeIndex x = g.unflatten(flat);
        if (x[axis] - 1 >= 0 && x[axis] + 1 <= g.n) out[flat] = diff_central_at(v, x, axis);
    }
    return out;
}

VectorField grad_forward(const MeshFunction& v) {
    const Grid& g = v.grid();
    VectorField w(g);
    for (std::int64_t flat = 0; flat < g.num_nodes(); ++flat) {
        const NodeIndex x = g.unflatten(flat);
        for (int i = 0; i < g.dim; ++i)
            if (x[i] + 1 <= g.n) w(flat, i) = diff_forward_at(v, x, i);
    }
    return w;
}

VectorField grad_backward(const MeshFunction& v) {
    const Grid& g = v.grid();
    VectorField w(g);
    for (std::int64_t flat = 0; flat < g.num_nodes(); ++flat) {
        const NodeIndex x = g.unflatten(flat);
        for (int i = 0; i < g.dim; ++i)
            if (x[i] - 1 >= 0) w(flat, i) = diff_backward_at(v, x, i);
    }
    return w;
}

MeshFunction div_field(const VectorField& w) {
    const Grid& g = w.grid;
    const double h = g.h();
    MeshFunction out(g);
    for (std::int64_t flat = 0; flat < g.num_nodes(); ++flat) {
        const NodeIndex x = g.unflatten(flat);
        bool fits = true;
        for (int i = 0; i < g.dim; ++i)
            if (x[i] - 1 < 0) { fits = false; break; }
        if (!fits) continue;
        double s = 0.0;
        for (int i = 0; i < g.dim; ++i)
            s += (w.at(x, i) - w.at(shifted(x, i, -1), i)) / h;
        out[flat] = s;
    }
    return out;
}

MeshFunction laplacian(const MeshFunction& v) {
    const Grid& g = v.grid();
    MeshFunction out(g);
    for (std::int64_t flat = 0; flat < g.num_nodes(); ++flat) {
        const NodeIndex x = g.unflatten(flat);
        bool fits = true;
        for (int i = 0; i < g.dim; ++i)
            if (x[i] - 1 < 0 || x[i] + 1 > g.n) { fits = false; break; }
        if (!fits) continue;
        double s = 0.0;
        for (int i = 0; i < g.dim; ++i) s += second_diff_at(v, x, i);
        out[flat] = s;
    }
    return out;
}

namespace {

template <class F>
MatrixField matrix_field_on_interior(const GridIndexSets& sets, F&& per_node) {
    MatrixField mf;
    mf.grid = sets.grid;
    mf.nodes = sets.interior;
    mf.entries.resize(mf.nodes.size() * sets.grid.dim * sets.grid.dim);
    for (std::size_t p = 0; p < mf.nodes.size(); ++p)
        mf.set(p, per_node(sets.grid.unflatten(mf.nodes[p])));
    return mf;
}

}  // namespace

MatrixField hessian_ns(const MeshFunction& v, const GridIndexSets& sets) {
    return matrix_field_on_interior(sets, [&](const NodeIndex& x) { return hessian_ns_at(v, x); });
}

MatrixField hessian_central(const MeshFunction& v, const GridIndexSets& sets) {
    return matrix_field_on_interior(sets,
                                    [&](const NodeIndex& x) { return hessian_central_at(v, x); });
}

MatrixField hessian_hat(const MeshFunction& v, const GridIndexSets& sets) {
    return matrix_field_on_interior(sets, [&](const NodeIndex& x) { return hessian_hat_at(v, x); });
}

MatrixField translation_matrix(const VectorField& w, const GridIndexSets& sets) {
    return matrix_field_on_interior(sets, [&](const NodeIndex& x) {
        Mat m(sets.grid.dim);
        for (int i = 0; i < sets.grid.dim; ++i)
            for (int j = 0; j < sets.grid.dim; ++j)
                m(i, j) = w.at(shifted(x, i, -1), j);
        return m;
    });
}

// ---------------------------------------------------------------------------
// Norms and inner products
// ---------------------------------------------------------------------------

namespace {

double cell_measure(const Grid& g) {
    double m = 1.0;
    for (int k = 0; k < g.dim; ++k) m *= g.h();
    return m;
}

}  // namespace

double max_norm(const MeshFunction& v, const GridIndexSets& sets) {
    double m = 0.0;
    for (std::int64_t flat : sets.interior) m = std::max(m, std::fabs(v[flat]));
    return m;
}

double l2_norm(const MeshFunction& v, const GridIndexSets& sets) {
    double s = 0.0;
    for (std::int64_t flat : sets.interior) s += v[flat] * v[flat];
    return std::sqrt(cell_measure(sets.grid) * s);
}

double h1_seminorm(const MeshFunction& v, const GridIndexSets& sets) {
    const Grid& g = sets.grid;
    double s = 0.0;
    for (std::int64_t flat = 0; flat < g.num_nodes(); ++flat) {
        const NodeIndex x = g.unflatten(flat);
        for (int i = 0; i < g.dim; ++i) {
            if (x[i] + 1 > g.n) continue;
            const double dv = diff_forward_at(v, x, i);
            s += dv * dv;
        }
    }
    return std::sqrt(cell_measure(g) * s);
}

double h1_norm(const MeshFunction& v, const GridIndexSets& sets) {
    const double a = l2_norm(v, sets), b = h1_seminorm(v, sets);
    return std::sqrt(a * a + b * b);
}

double seminorm_2inf(const MeshFunction& v, const GridIndexSets& sets) {
    const Grid& g = sets.grid;
    const double h = g.h();
    double m = 0.0;
    for (std::int64_t flat : sets.interior) {
        const NodeIndex x = g.unflatten(flat);
        for (int i = 0; i < g.dim; ++i)
            for (int j = 0; j < g.dim; ++j)
                m = std::max(m, std::fabs(bwd_fwd(v, x, i, j, h)));
    }
    return m;
}

double seminorm_1inf(const MeshFunction& v, const GridIndexSets& sets) {
    const Grid& g = sets.grid;
    double m = 0.0;
    for (std::int64_t flat : sets.interior) {
        const NodeIndex x = g.unflatten(flat);
        for (int i = 0; i < g.dim; ++i)
            m = std::max(m, std::fabs(diff_forward_at(v, x, i)));
    }
    return m;
}

double inner_l2(const MeshFunction& v, const MeshFunction& w, const GridIndexSets& sets) {
    double s = 0.0;
    for (std::int64_t flat : sets.interior) s += v[flat] * w[flat];
    return cell_measure(sets.grid) * s;
}

double inner_vec(const VectorField& v, const VectorField& w, const GridIndexSets& sets) {
    double s = 0.0;
    for (std::int64_t flat : sets.interior)
        for (int i = 0; i < sets.grid.dim; ++i)
            s += v(flat, i) * w(flat, i);
    return cell_measure(sets.grid) * s;
}

}  // namespace mafd
