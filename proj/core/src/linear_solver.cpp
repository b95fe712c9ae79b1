#include "pxlab/linear_solver.hpp"

#include <cmath>
#include <string>

#include "pxlab/error.hpp"

namespace pxlab {

LaggedOperator::LaggedOperator(const Grid& grid, const std::array<std::vector<double>, 3>& diffusivity)
    : grid_(grid), diagonal_(grid.size(), 0.0) {
  for (int a = 0; a < grid.dim; ++a) {
    const double h = grid.spacing(a);
    const std::size_t nf = grid.face_count(a);
    if (diffusivity[a].size() != nf) throw InvalidArgument("diffusivity does not match grid faces");
    coupling_[a].resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      const int coord = grid.unravel_face(a, f)[a];
      const bool wall = coord == 0 || coord == grid.cells[a];
      const double d = diffusivity[a][f];
      if (!std::isfinite(d)) throw NumericalError("non-finite face diffusivity in lagged operator");
      coupling_[a][f] = (wall ? 2.0 : 1.0) * d / (h * h);
    }
  }
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const auto idx = grid.unravel(c);
    double s = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      auto right = idx;
      right[a] += 1;
      s += coupling_[a][grid.face_index(a, idx)] + coupling_[a][grid.face_index(a, right)];
    }
    diagonal_[c] = s;
  }
}

ScalarField LaggedOperator::apply(const ScalarField& u) const {
  ScalarField out(grid_);
  for (std::size_t c = 0; c < grid_.size(); ++c) {
    const auto idx = grid_.unravel(c);
    double acc = diagonal_[c] * u[c];
    for (int a = 0; a < grid_.dim; ++a) {
      if (idx[a] > 0) {
        auto nb = idx;
        nb[a] -= 1;
        acc -= coupling_[a][grid_.face_index(a, idx)] * u[grid_.index(nb[0], nb[1], nb[2])];
      }
      if (idx[a] + 1 < grid_.cells[a]) {
        auto nb = idx;
        nb[a] += 1;
        acc -= coupling_[a][grid_.face_index(a, nb)] * u[grid_.index(nb[0], nb[1], nb[2])];
      }
    }
    out[c] = acc;
  }
  return out;
}

ScalarField LaggedOperator::solve(double shift, double scale, const ScalarField& rhs, double tol,
                                  int max_iters, SolveStats* stats) const {
  const std::size_t n = grid_.size();
  if (grid_.dim == 1) {
    // Thomas algorithm; the matrix is diagonally dominant for shift >= 0.
    std::vector<double> c(n, 0.0), d(n, 0.0);
    const auto& k = coupling_[0];
    double beta = shift + scale * diagonal_[0];
    if (beta == 0.0) throw NumericalError("singular tridiagonal system");
    c[0] = n > 1 ? -scale * k[1] / beta : 0.0;
    d[0] = rhs[0] / beta;
    for (std::size_t i = 1; i < n; ++i) {
      const double lower = -scale * k[i];
      beta = shift + scale * diagonal_[i] - lower * c[i - 1];
      if (beta == 0.0) throw NumericalError("singular tridiagonal system");
      c[i] = i + 1 < n ? -scale * k[i + 1] / beta : 0.0;
      d[i] = (rhs[i] - lower * d[i - 1]) / beta;
    }
    ScalarField x(grid_);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    if (stats) *stats = {1, 0.0};
    return x;
  }

  auto matvec = [&](const ScalarField& v) {
    ScalarField av = apply(v);
    for (std::size_t i = 0; i < n; ++i) av[i] = shift * v[i] + scale * av[i];
    return av;
  };
  std::vector<double> minv(n);
  for (std::size_t i = 0; i < n; ++i) minv[i] = 1.0 / (shift + scale * diagonal_[i]);

  ScalarField x(grid_);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] * minv[i];
  ScalarField r = matvec(x);
  double bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = rhs[i] - r[i];
    bnorm += rhs[i] * rhs[i];
  }
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return ScalarField(grid_);
  }
  ScalarField z(grid_), p(grid_);
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = r[i] * minv[i];
    p[i] = z[i];
    rz += r[i] * z[i];
  }
  double rel = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    double rn = 0.0;
    for (std::size_t i = 0; i < n; ++i) rn += r[i] * r[i];
    rel = std::sqrt(rn) / bnorm;
    if (rel <= tol) {
      if (stats) *stats = {it, rel};
      return x;
    }
    ScalarField ap = matvec(p);
    double pap = 0.0;
    for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      z[i] = r[i] * minv[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  if (rel <= 1e3 * tol) {
    if (stats) *stats = {max_iters, rel};
    return x;
  }
  throw NumericalError("conjugate gradients stalled at relative residual " + std::to_string(rel));
}

}  // namespace pxlab
