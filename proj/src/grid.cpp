#include "mafd/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mafd {

const char* to_string(GridMode mode) {
    return mode == GridMode::Full ? "full" : "interior";
}

Grid::Grid(int dim_, int n_, GridMode mode_) : dim(dim_), n(n_), mode(mode_) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("Grid: dimension must be 2 or 3");
    const int min_n = (mode == GridMode::Interior) ? 4 : 2;
    if (n < min_n) {
        std::ostringstream os;
        os << "Grid: n=" << n << " too small for " << to_string(mode)
           << " mode (need n >= " << min_n << ")";
        throw std::invalid_argument(os.str());
    }
}

bool MeshFunction::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

GridIndexSets build_index_sets(const Grid& grid) {
    GridIndexSets sets;
    sets.grid = grid;
    const std::int64_t total = grid.num_nodes();
    sets.boundary_mask.assign(total, 1);
    sets.interior_pos.assign(total, -1);

    // Offset of the interior block from each face: the stencil reach of the
    // mode (h for the full-domain sets, 2h for the inset interior sets).
    const int lo = (grid.mode == GridMode::Interior) ? 2 : 1;
    const int hi = grid.n - lo;

    for (std::int64_t flat = 0; flat < total; ++flat) {
        const NodeIndex iv = grid.unflatten(flat);
        bool inside = true;
        for (int k = 0; k < grid.dim; ++k)
            if (iv[k] < lo || iv[k] > hi) { inside = false; break; }
        if (inside) {
            sets.boundary_mask[flat] = 0;
            sets.interior_pos[flat] = static_cast<std::int64_t>(sets.interior.size());
            sets.interior.push_back(flat);
        } else {
            sets.boundary.push_back(flat);
        }
    }
    return sets;
}

MeshFunction restrict_to_grid(const Grid& grid,
                              const std::function<double(const Point&)>& phi) {
    MeshFunction out(grid);
    const std::int64_t total = grid.num_nodes();
    for (std::int64_t flat = 0; flat < total; ++flat) {
        const double v = phi(grid.coords(grid.unflatten(flat)));
        if (!std::isfinite(v)) {
            const NodeIndex iv = grid.unflatten(flat);
            std::ostringstream os;
            os << "restrict_to_grid: non-finite value at node (" << iv[0] << "," << iv[1];
            if (grid.dim == 3) os << "," << iv[2];
            os << ")";
            throw std::domain_error(os.str());
        }
        out[flat] = v;
    }
    return out;
}

MeshFunction restrict_to_interior(const GridIndexSets& sets,
                                  const std::function<double(const Point&)>& phi) {
    MeshFunction out(sets.grid);
    for (std::int64_t flat : sets.interior) {
        const double v = phi(sets.grid.coords(sets.grid.unflatten(flat)));
        if (!std::isfinite(v))
            throw std::domain_error("restrict_to_interior: non-finite value at interior node");
        out[flat] = v;
    }
    return out;
}

MeshFunction set_boundary(const MeshFunction& u, const MeshFunction& g,
                          const GridIndexSets& sets) {
    if (!(u.grid() == g.grid()) || !(u.grid() == sets.grid))
        throw std::invalid_argument("set_boundary: grid mismatch");
    MeshFunction out = u;
    for (std::int64_t flat : sets.boundary) out[flat] = g[flat];
    return out;
}

}  // namespace mafd
