#pragma once

#include <array>
#include <vector>

#include "pxlab/grid.hpp"

namespace pxlab {

/// The SPD matrix A = -div(D grad .) with the face diffusivity D frozen,
/// stored as one coupling coefficient per face (D / h^2 inside, 2 D / h^2 on a wall).
class LaggedOperator {
 public:
  LaggedOperator(const Grid& grid, const std::array<std::vector<double>, 3>& diffusivity);

  const Grid& grid() const { return grid_; }
  ScalarField apply(const ScalarField& u) const;

  struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
  };

  /// Solves (shift I + scale A) x = rhs. Tridiagonal elimination in 1D,
  /// Jacobi-preconditioned conjugate gradients otherwise.
  ScalarField solve(double shift, double scale, const ScalarField& rhs, double tol = 1e-12,
                    int max_iters = 5000, SolveStats* stats = nullptr) const;

 private:
  Grid grid_;
  std::array<std::vector<double>, 3> coupling_;
  std::vector<double> diagonal_;
};

}  // namespace pxlab
