#pragma once

#include <cstdint>
#include <vector>

#include "mafd/grid.hpp"
#include "mafd/point_matrix.hpp"

namespace mafd {

// ---------------------------------------------------------------------------
// Ghost extrapolation
// ---------------------------------------------------------------------------

/// Read-only view of a mesh function extended by quadratic extrapolation.
///
/// Values up to two steps outside the box along a single axis are produced
/// from the quadratic through the three nodes nearest that face, along that
/// axis. At most one coordinate may be out of range.
class GhostView {
public:
    explicit GhostView(const MeshFunction& u) : u_(&u) {}

    double at(const NodeIndex& iv) const;
    const Grid& grid() const { return u_->grid(); }

private:
    const MeshFunction* u_;
};

/// Extended evaluation context for full-domain stencils near the boundary.
/// Requires n >= 2 so the 3-point extrapolation stencil fits.
GhostView ghost_extrapolate(const MeshFunction& u);

/// Extrapolated value at a node up to two steps outside the box (single axis).
double ghost_value(const MeshFunction& u, const NodeIndex& iv);

// ---------------------------------------------------------------------------
// Pointwise difference operators (caller guarantees the stencil fits;
// overloads on GhostView extend one/two steps past the box)
// ---------------------------------------------------------------------------

double diff_forward_at(const MeshFunction& v, NodeIndex x, int axis);
double diff_backward_at(const MeshFunction& v, NodeIndex x, int axis);
double diff_central_at(const MeshFunction& v, NodeIndex x, int axis);

double diff_forward_at(const GhostView& v, NodeIndex x, int axis);
double diff_backward_at(const GhostView& v, NodeIndex x, int axis);

/// Second difference along one axis: backward of forward (== forward of
/// backward), the diagonal entry of every discrete Hessian here.
double second_diff_at(const MeshFunction& v, NodeIndex x, int axis);

/// Nonsymmetric discrete Hessian at a node: entry (i,j) = backward_j forward_i.
Mat hessian_ns_at(const MeshFunction& v, NodeIndex x);
Mat hessian_ns_at(const GhostView& v, NodeIndex x);

/// Central discrete Hessian: one-axis second differences on the diagonal,
/// central-central mixed entries (9-point in 2D). Symmetric by construction.
Mat hessian_central_at(const MeshFunction& v, NodeIndex x);

/// Backward-backward discrete Hessian: entry (i,j) = backward_j backward_i.
/// Symmetric; its trace is not the discrete Laplacian.
Mat hessian_hat_at(const MeshFunction& v, NodeIndex x);
Mat hessian_hat_at(const GhostView& v, NodeIndex x);

// ---------------------------------------------------------------------------
// Whole-field operators
// ---------------------------------------------------------------------------

/// One d-vector per lattice node; node-major storage.
/// Operators fill entries only where their stencil fits, 0 elsewhere.
struct VectorField {
    Grid grid;
    std::vector<double> comp;  // num_nodes * d

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g), comp(g.num_nodes() * g.dim, 0.0) {}

    double operator()(std::int64_t flat, int i) const { return comp[flat * grid.dim + i]; }
    double& operator()(std::int64_t flat, int i) { return comp[flat * grid.dim + i]; }
    double at(const NodeIndex& iv, int i) const { return (*this)(grid.flatten(iv), i); }
};

/// One d x d matrix per node of a fixed node list (normally an interior set).
struct MatrixField {
    Grid grid;
    std::vector<std::int64_t> nodes;
    std::vector<double> entries;  // nodes.size() * d * d

    Mat get(std::size_t pos) const {
        Mat m(grid.dim);
        const int dd = grid.dim * grid.dim;
        for (int k = 0; k < dd; ++k) m.a[k] = entries[pos * dd + k];
        return m;
    }
    void set(std::size_t pos, const Mat& m) {
        const int dd = grid.dim * grid.dim;
        for (int k = 0; k < dd; ++k) entries[pos * dd + k] = m.a[k];
    }
};

MeshFunction diff_forward(const MeshFunction& v, int axis);
MeshFunction diff_backward(const MeshFunction& v, int axis);
MeshFunction diff_central(const MeshFunction& v, int axis);

/// Forward gradient; component i defined where x + h e_i stays in the box.
VectorField grad_forward(const MeshFunction& v);
/// Backward gradient; component i defined where x - h e_i stays in the box.
VectorField grad_backward(const MeshFunction& v);

/// Backward divergence sum_i backward_i w_i; defined where every
/// x - h e_i stays in the box.
MeshFunction div_field(const VectorField& w);

/// Discrete Laplacian sum_i forward_i backward_i v; defined one cell in.
MeshFunction laplacian(const MeshFunction& v);

MatrixField hessian_ns(const MeshFunction& v, const GridIndexSets& sets);
MatrixField hessian_central(const MeshFunction& v, const GridIndexSets& sets);
MatrixField hessian_hat(const MeshFunction& v, const GridIndexSets& sets);

/// Translation matrix of a vector field: entry (i,j) at x is w_j(x - h e_i).
MatrixField translation_matrix(const VectorField& w, const GridIndexSets& sets);

// ---------------------------------------------------------------------------
// Discrete norms and inner products
// ---------------------------------------------------------------------------

/// max over interior nodes of |v|.
double max_norm(const MeshFunction& v, const GridIndexSets& sets);

/// sqrt(h^d * sum over interior nodes of v^2).
double l2_norm(const MeshFunction& v, const GridIndexSets& sets);

/// Discrete H1 seminorm. The sum runs over every lattice edge
/// (x, x + h e_i), which makes the energy identity
/// -<div(grad v), v> = |v|_1h^2 exact for boundary-vanishing v.
double h1_seminorm(const MeshFunction& v, const GridIndexSets& sets);

double h1_norm(const MeshFunction& v, const GridIndexSets& sets);

/// max over interior nodes, axes i,j of |backward_j forward_i v|.
double seminorm_2inf(const MeshFunction& v, const GridIndexSets& sets);

/// max over interior nodes, axes i of |forward_i v|.
double seminorm_1inf(const MeshFunction& v, const GridIndexSets& sets);

/// h^d * sum over interior nodes of v*w.
double inner_l2(const MeshFunction& v, const MeshFunction& w, const GridIndexSets& sets);

/// Componentwise sum of scalar inner products.
double inner_vec(const VectorField& v, const VectorField& w, const GridIndexSets& sets);

}  // namespace mafd
