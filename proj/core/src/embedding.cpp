#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pxlab/error.hpp"
#include "pxlab/function_spaces.hpp"
#include "pxlab/linear_solver.hpp"
#include "pxlab/operators.hpp"

namespace pxlab {
namespace {

double l2(const ScalarField& u) {
  double s = 0.0;
  for (double v : u.values) s += v * v;
  return std::sqrt(s * u.grid.cell_volume());
}

void normalize(ScalarField& u) {
  const double n = l2(u);
  if (n > 0.0)
    for (double& v : u.values) v /= n;
}

// Gradient of the ratio with respect to the cell values.
// d lambda / d v_i follows from differentiating rho(v / lambda) = 1 implicitly.
ScalarField ratio_gradient(const ScalarField& u, const ExponentSamples& p, double r) {
  const Grid& grid = u.grid;
  const double nr = lr_norm(u, r);
  const FaceVectorField g = gradient_faces(u);
  const ModularTerms terms = gradient_terms(g, p);
  const double lambda = luxemburg_norm(terms);

  double s = 0.0;
  for (std::size_t i = 0; i < terms.values.size(); ++i) {
    const double v = terms.values[i];
    if (v == 0.0) continue;
    s += terms.weights[i] * terms.exponents[i] * std::pow(v / lambda, terms.exponents[i]) / lambda;
  }

  const auto comps = gradient_components(u);
  std::array<std::array<std::vector<double>, 3>, 3> cot;
  std::size_t k = 0;
  for (int a = 0; a < grid.dim; ++a) {
    const std::size_t nf = g.magnitude[a].size();
    for (int c = 0; c < grid.dim; ++c) cot[a][c].assign(nf, 0.0);
    for (std::size_t f = 0; f < nf; ++f, ++k) {
      const double v = terms.values[k];
      if (v == 0.0) continue;
      const double pe = terms.exponents[k];
      const double dl_dv = terms.weights[k] * pe * std::pow(v / lambda, pe - 1.0) / lambda / s;
      for (int c = 0; c < grid.dim; ++c) cot[a][c][f] = dl_dv * comps[a][c][f] / v;
    }
  }
  const ScalarField dlambda = gradient_adjoint(grid, cot);

  ScalarField out(grid);
  const double vol = grid.cell_volume();
  const double nr_pow = std::pow(nr, 1.0 - r);
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double uc = u[c];
    const double dn = uc == 0.0 ? 0.0 : vol * std::pow(std::abs(uc), r - 1.0) * (uc > 0 ? 1.0 : -1.0) * nr_pow;
    out[c] = (dn * lambda - nr * dlambda[c]) / (lambda * lambda);
  }
  return out;
}

ScalarField random_start(const Grid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int modes = 4;
  std::vector<std::array<int, 3>> ks;
  std::array<int, 3> k{1, 1, 1};
  for (k[0] = 1; k[0] <= modes; ++k[0])
    for (k[1] = 1; k[1] <= (grid.dim > 1 ? modes : 1); ++k[1])
      for (k[2] = 1; k[2] <= (grid.dim > 2 ? modes : 1); ++k[2]) ks.push_back(k);
  std::vector<double> coef(ks.size());
  for (std::size_t m = 0; m < ks.size(); ++m) {
    double k2 = 0.0;
    for (int a = 0; a < grid.dim; ++a) k2 += ks[m][a] * ks[m][a];
    coef[m] = normal(rng) / k2;
  }
  ScalarField u(grid);
  for (std::size_t c = 0; c < u.size(); ++c) {
    const auto x = grid.center(grid.unravel(c));
    double v = 0.0;
    for (std::size_t m = 0; m < ks.size(); ++m) {
      double s = coef[m];
      for (int a = 0; a < grid.dim; ++a) s *= std::sin(ks[m][a] * std::numbers::pi * x[a] / grid.extent[a]);
      v += s;
    }
    u[c] = v;
  }
  return u;
}

}  // namespace

double embedding_ratio(const ScalarField& u, const ExponentSamples& p, double target_r) {
  const double denom = gradient_luxemburg_norm(u, p);
  if (denom == 0.0) throw NumericalError("embedding ratio of a zero field");
  return lr_norm(u, target_r) / denom;
}

EmbeddingEstimate estimate_embedding_constant(const Grid& grid, const ExponentSamples& p, double target_r,
                                              int restarts, int iters, std::uint64_t seed) {
  if (restarts < 1) throw InvalidArgument("embedding estimate needs at least one start");
  if (!(target_r >= 1.0)) throw InvalidArgument("embedding target exponent must be >= 1");
  if (!(grid == p.grid)) throw InvalidArgument("exponent samples use a different grid");
  const double crit = sobolev_exponent(grid.dim, p.p_minus);
  if (p.p_minus < grid.dim && !(target_r < crit)) {
    throw InvalidArgument("target exponent outside the embedding range r < N p- / (N - p-)");
  }

  std::array<std::vector<double>, 3> unit;
  for (int a = 0; a < grid.dim; ++a) unit[a].assign(grid.face_count(a), 1.0);
  const LaggedOperator laplace(grid, unit);

  EmbeddingEstimate best;
  bool found = false;
  for (int s = 0; s < restarts; ++s) {
    ScalarField u = random_start(grid, seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(s + 1));
    normalize(u);
    if (l2(u) == 0.0) {
      best.per_start.push_back(0.0);
      continue;
    }
    double ratio = embedding_ratio(u, p, target_r);
    double step = -1.0;
    for (int it = 0; it < iters; ++it) {
      const ScalarField grad = ratio_gradient(u, p, target_r);
      ScalarField dir = laplace.solve(0.0, 1.0, grad);
      double dmax = 0.0, umax = 0.0;
      for (std::size_t c = 0; c < u.size(); ++c) {
        dmax = std::max(dmax, std::abs(dir[c]));
        umax = std::max(umax, std::abs(u[c]));
      }
      if (dmax == 0.0) break;
      if (step < 0.0) step = 0.5 * umax / dmax;
      bool improved = false;
      for (int bt = 0; bt < 40; ++bt) {
        ScalarField trial = u;
        for (std::size_t c = 0; c < u.size(); ++c) trial[c] += step * dir[c];
        normalize(trial);
        if (l2(trial) > 0.0) {
          const double tr = embedding_ratio(trial, p, target_r);
          if (tr > ratio) {
            u = std::move(trial);
            ratio = tr;
            improved = true;
            step *= 2.0;
            break;
          }
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    best.per_start.push_back(ratio);
    if (!found || ratio > best.constant) {
      best.constant = ratio;
      best.maximizer = u;
      found = true;
    }
  }
  if (!found) throw NumericalError("every embedding start degenerated to the zero field");
  return best;
}

}  // namespace pxlab
