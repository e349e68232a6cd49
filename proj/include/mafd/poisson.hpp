#pragma once

#include <memory>

#include "mafd/grid.hpp"

namespace mafd {

/// Assembled Dirichlet problem for the negative discrete Laplacian on the
/// interior nodes of a grid: -lap(w) = rhs in the interior, w = bc on the
/// boundary ring. The operator is the standard 5-point (7-point in 3D)
/// Laplacian, symmetric positive definite; boundary values enter through a
/// right-hand-side lift. Factorized once at construction and reused.
class PoissonSystem {
public:
    PoissonSystem(const Grid& grid, const GridIndexSets& sets);
    ~PoissonSystem();
    PoissonSystem(PoissonSystem&&) noexcept;
    PoissonSystem& operator=(PoissonSystem&&) noexcept;

    const Grid& grid() const;
    const GridIndexSets& sets() const;

    /// Solves -lap(w) = rhs at interior nodes, w = bc on the boundary ring.
    /// Only interior values of rhs and boundary values of bc are read.
    /// If rel_residual is given, receives ||A w - b||_2 / ||b||_2.
    /// Throws std::runtime_error on non-finite input or solver breakdown
    /// (relative residual above 1e-10).
    MeshFunction solve(const MeshFunction& rhs, const MeshFunction& bc,
                       double* rel_residual = nullptr) const;

    /// Applies the assembled operator with the boundary lift: returns
    /// -lap(w) at interior nodes (0 on boundary nodes).
    MeshFunction apply(const MeshFunction& w) const;

    /// Smallest eigenvalue of the assembled SPD operator, by inverse
    /// iteration on the stored factorization, 1e-6 relative accuracy.
    double smallest_eigenvalue() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mafd
