#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace mafd {

/// Multi-index of a lattice node. Components beyond the grid dimension are 0.
using NodeIndex = std::array<int, 3>;

/// Point in [0,1]^d. Components beyond the grid dimension are 0.
using Point = std::array<double, 3>;

/// Node classification mode.
///
/// Full:     interior nodes are those one cell away from every face
///           (the usual 5/9-point interior), boundary ring has width 1.
/// Interior: interior nodes are two cells away from every face,
///           boundary ring has width 2; no stencil ever leaves the box.
enum class GridMode { Full, Interior };

const char* to_string(GridMode mode);

/// Uniform lattice on the unit box [0,1]^d with spacing h = 1/n.
///
/// Nodes are the points i*h, i in {0,...,n}^d, stored in lexicographic
/// order with the last axis varying fastest (row-major).
struct Grid {
    int dim = 2;
    int n = 8;
    GridMode mode = GridMode::Full;

    Grid() = default;
    Grid(int dim_, int n_, GridMode mode_);

    double h() const { return 1.0 / n; }
    int nodes_per_axis() const { return n + 1; }

    std::int64_t num_nodes() const {
        std::int64_t m = 1;
        for (int k = 0; k < dim; ++k) m *= (n + 1);
        return m;
    }

    std::int64_t flatten(const NodeIndex& iv) const {
        std::int64_t idx = 0;
        for (int k = 0; k < dim; ++k) idx = idx * (n + 1) + iv[k];
        return idx;
    }

    NodeIndex unflatten(std::int64_t flat) const {
        NodeIndex iv{0, 0, 0};
        for (int k = dim - 1; k >= 0; --k) {
            iv[k] = static_cast<int>(flat % (n + 1));
            flat /= (n + 1);
        }
        return iv;
    }

    /// Coordinates of a node; exactly i/n componentwise.
    Point coords(const NodeIndex& iv) const {
        Point p{0.0, 0.0, 0.0};
        for (int k = 0; k < dim; ++k) p[k] = static_cast<double>(iv[k]) / n;
        return p;
    }

    bool in_box(const NodeIndex& iv) const {
        for (int k = 0; k < dim; ++k)
            if (iv[k] < 0 || iv[k] > n) return false;
        return true;
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && n == o.n && mode == o.mode;
    }
};

/// Scalar values on every lattice node of a grid.
class MeshFunction {
public:
    MeshFunction() = default;
    explicit MeshFunction(const Grid& g) : grid_(g), values_(g.num_nodes(), 0.0) {}

    const Grid& grid() const { return grid_; }
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

    double operator[](std::int64_t flat) const { return values_[flat]; }
    double& operator[](std::int64_t flat) { return values_[flat]; }

    double at(const NodeIndex& iv) const { return values_[grid_.flatten(iv)]; }
    double& at(const NodeIndex& iv) { return values_[grid_.flatten(iv)]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// True when every stored value is finite.
    bool all_finite() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Partition of the lattice into interior nodes and the boundary ring.
///
/// Full mode: interior iff 1 <= i_k <= n-1 along every axis.
/// Interior mode: interior iff 2 <= i_k <= n-2 along every axis.
/// Lists are sorted by flat index.
struct GridIndexSets {
    Grid grid;
    std::vector<std::int64_t> interior;
    std::vector<std::int64_t> boundary;
    /// 1 for boundary nodes, 0 for interior; one entry per lattice node.
    std::vector<std::uint8_t> boundary_mask;
    /// Position in `interior` for interior nodes, -1 otherwise.
    std::vector<std::int64_t> interior_pos;

    bool is_interior(std::int64_t flat) const { return boundary_mask[flat] == 0; }
    bool is_interior(const NodeIndex& iv) const { return is_interior(grid.flatten(iv)); }
};

GridIndexSets build_index_sets(const Grid& grid);

/// Restriction r_h: evaluates phi at every lattice node.
/// Throws std::domain_error if phi is non-finite at some node.
MeshFunction restrict_to_grid(const Grid& grid, const std::function<double(const Point&)>& phi);

/// Restriction of phi to interior nodes only; boundary nodes are set to 0.
/// Used for right-hand sides that may be singular on the boundary ring.
MeshFunction restrict_to_interior(const GridIndexSets& sets,
                                  const std::function<double(const Point&)>& phi);

/// Returns u on interior nodes and g on boundary nodes.
/// Throws std::invalid_argument on grid mismatch.
MeshFunction set_boundary(const MeshFunction& u, const MeshFunction& g,
                          const GridIndexSets& sets);

}  // namespace mafd
