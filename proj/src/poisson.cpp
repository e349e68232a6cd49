#include "mafd/poisson.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mafd {

struct PoissonSystem::Impl {
    Grid grid;
    GridIndexSets sets;
    Eigen::SparseMatrix<double> A;  // interior x interior, -lap scaled by 1/h^2
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    // Boundary lift: for each interior row, the list of (boundary flat index,
    // coefficient) pairs contributing bc values to the right-hand side.
    std::vector<std::vector<std::pair<std::int64_t, double>>> lift;
};

PoissonSystem::PoissonSystem(const Grid& grid, const GridIndexSets& sets)
    : impl_(std::make_unique<Impl>()) {
    if (sets.interior.empty())
        throw std::invalid_argument("PoissonSystem: empty interior set");
    impl_->grid = grid;
    impl_->sets = sets;

    const auto m = static_cast<Eigen::Index>(sets.interior.size());
    const double inv_h2 = 1.0 / (grid.h() * grid.h());

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(m) * (2 * grid.dim + 1));
    impl_->lift.resize(sets.interior.size());

    for (std::size_t p = 0; p < sets.interior.size(); ++p) {
        const NodeIndex x = grid.unflatten(sets.interior[p]);
        trips.emplace_back(static_cast<int>(p), static_cast<int>(p), 2.0 * grid.dim * inv_h2);
        for (int i = 0; i < grid.dim; ++i) {
            for (int s : {-1, +1}) {
                NodeIndex nb = x;
                nb[i] += s;
                const std::int64_t nb_flat = grid.flatten(nb);
                const std::int64_t q = sets.interior_pos[nb_flat];
                if (q >= 0)
                    trips.emplace_back(static_cast<int>(p), static_cast<int>(q), -inv_h2);
                else
                    impl_->lift[p].emplace_back(nb_flat, inv_h2);
            }
        }
    }

    impl_->A.resize(m, m);
    impl_->A.setFromTriplets(trips.begin(), trips.end());
    impl_->solver.compute(impl_->A);
    if (impl_->solver.info() != Eigen::Success)
        throw std::runtime_error("PoissonSystem: factorization failed");
}

PoissonSystem::~PoissonSystem() = default;
PoissonSystem::PoissonSystem(PoissonSystem&&) noexcept = default;
PoissonSystem& PoissonSystem::operator=(PoissonSystem&&) noexcept = default;

const Grid& PoissonSystem::grid() const { return impl_->grid; }
const GridIndexSets& PoissonSystem::sets() const { return impl_->sets; }

MeshFunction PoissonSystem::solve(const MeshFunction& rhs, const MeshFunction& bc,
                                  double* rel_residual) const {
    const Impl& im = *impl_;
    const auto m = static_cast<Eigen::Index>(im.sets.interior.size());

    Eigen::VectorXd b(m);
    for (Eigen::Index p = 0; p < m; ++p) {
        double v = rhs[im.sets.interior[p]];
        for (const auto& [nb_flat, coeff] : im.lift[p]) v += coeff * bc[nb_flat];
        if (!std::isfinite(v))
            throw std::runtime_error("PoissonSystem::solve: non-finite right-hand side");
        b[p] = v;
    }

    const Eigen::VectorXd w = im.solver.solve(b);
    if (im.solver.info() != Eigen::Success)
        throw std::runtime_error("PoissonSystem::solve: back-substitution failed");

    const double bn = b.norm();
    const double rel = (bn > 0.0) ? (im.A * w - b).norm() / bn : (im.A * w - b).norm();
    if (!(rel <= 1e-10) || !w.allFinite())
        throw std::runtime_error("PoissonSystem::solve: relative residual above 1e-10");
    if (rel_residual) *rel_residual = rel;

    MeshFunction out(im.grid);
    for (std::int64_t flat : im.sets.boundary) out[flat] = bc[flat];
    for (Eigen::Index p = 0; p < m; ++p) out[im.sets.interior[p]] = w[p];
    return out;
}

MeshFunction PoissonSystem::apply(const MeshFunction& w) const {
    const Impl& im = *impl_;
    const auto m = static_cast<Eigen::Index>(im.sets.interior.size());

    Eigen::VectorXd w_int(m);
    for (Eigen::Index p = 0; p < m; ++p) w_int[p] = w[im.sets.interior[p]];
    const Eigen::VectorXd Aw = im.A * w_int;

    MeshFunction out(im.grid);
    for (Eigen::Index p = 0; p < m; ++p) {
        double v = Aw[p];
        for (const auto& [nb_flat, coeff] : im.lift[p]) v -= coeff * w[nb_flat];
        out[im.sets.interior[p]] = v;
    }
    return out;
}

double PoissonSystem::smallest_eigenvalue() const {
    const Impl& im = *impl_;
    const auto m = static_cast<Eigen::Index>(im.sets.interior.size());

    Eigen::VectorXd x = Eigen::VectorXd::Ones(m);
    x.normalize();
    double lambda = x.dot(im.A * x);
    for (int it = 0; it < 1000; ++it) {
        Eigen::VectorXd y = im.solver.solve(x);
        y.normalize();
        const double next = y.dot(im.A * y);
        x = y;
        if (std::fabs(next - lambda) <= 1e-7 * std::fabs(next)) return next;
        lambda = next;
    }
    return lambda;
}

}  // namespace mafd
