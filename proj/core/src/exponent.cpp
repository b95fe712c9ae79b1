#include "pxlab/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pxlab/error.hpp"

namespace pxlab {

ExponentField ExponentField::constant(double value) {
  ExponentField p;
  p.kind_ = ExponentKind::constant;
  p.base_ = value;
  return p;
}

ExponentField ExponentField::affine(double base, std::vector<double> slope) {
  ExponentField p;
  p.kind_ = ExponentKind::affine;
  p.base_ = base;
  p.coeffs_ = std::move(slope);
  return p;
}

ExponentField ExponentField::sinusoidal(double base, double amplitude) {
  ExponentField p;
  p.kind_ = ExponentKind::sinusoidal;
  p.base_ = base;
  p.amplitude_ = amplitude;
  return p;
}

ExponentField ExponentField::sampled(std::vector<double> values) {
  ExponentField p;
  p.kind_ = ExponentKind::sampled;
  p.coeffs_ = std::move(values);
  return p;
}

double ExponentField::at_cell(const Grid& grid, std::size_t flat) const {
  switch (kind_) {
    case ExponentKind::constant:
      return base_;
    case ExponentKind::affine: {
      auto x = grid.center(grid.unravel(flat));
      double v = base_;
      for (int a = 0; a < grid.dim && a < static_cast<int>(coeffs_.size()); ++a) v += coeffs_[a] * x[a];
      return v;
    }
    case ExponentKind::sinusoidal: {
      auto x = grid.center(grid.unravel(flat));
      double s = 1.0;
      for (int a = 0; a < grid.dim; ++a) s *= std::sin(std::numbers::pi * x[a] / grid.extent[a]);
      return base_ + amplitude_ * s;
    }
    case ExponentKind::sampled:
      if (coeffs_.size() != grid.size()) {
        throw InvalidArgument("sampled exponent has " + std::to_string(coeffs_.size()) +
                              " values for a grid of " + std::to_string(grid.size()) + " cells");
      }
      return coeffs_[flat];
  }
  return base_;
}

ExponentSamples sample(const ExponentField& p, const Grid& grid) {
  ExponentSamples s;
  s.grid = grid;
  s.cell.resize(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double v = p.at_cell(grid, c);
    if (!std::isfinite(v)) throw InvalidArgument("exponent sample is not finite");
    s.cell[c] = v;
  }
  for (int a = 0; a < grid.dim; ++a) {
    const std::size_t nf = grid.face_count(a);
    s.face[a].resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      auto idx = grid.unravel_face(a, f);
      const int fa = idx[a];
      if (fa == 0) {
        s.face[a][f] = s.cell[grid.index(idx[0], idx[1], idx[2])];
      } else if (fa == grid.cells[a]) {
        idx[a] = fa - 1;
        s.face[a][f] = s.cell[grid.index(idx[0], idx[1], idx[2])];
      } else {
        auto left = idx;
        left[a] = fa - 1;
        s.face[a][f] = 0.5 * (s.cell[grid.index(left[0], left[1], left[2])] +
                              s.cell[grid.index(idx[0], idx[1], idx[2])]);
      }
    }
  }
  auto [lo, hi] = std::minmax_element(s.cell.begin(), s.cell.end());
  s.p_minus = *lo;
  s.p_plus = *hi;
  // face means lie inside the cell range; scanned anyway so the invariant is explicit
  for (int a = 0; a < grid.dim; ++a) {
    for (double v : s.face[a]) {
      s.p_minus = std::min(s.p_minus, v);
      s.p_plus = std::max(s.p_plus, v);
    }
  }
  if (!(s.p_minus > 1.0)) {
    throw InvalidArgument("exponent violates p_minus > 1 (p_minus = " + std::to_string(s.p_minus) + ")");
  }
  return s;
}

Extrema extrema(ExponentField& p, const Grid& grid) {
  auto s = sample(p, grid);
  Extrema e{s.p_minus, s.p_plus};
  p.cache_extrema(e);
  return e;
}

LogHolderReport log_holder_estimate(const ExponentField& p, const Grid& grid, double cap,
                                    std::uint64_t seed, std::size_t random_pairs) {
  if (grid.size() < 2) throw InvalidArgument("log-Holder estimate needs at least 2 cells");
  std::vector<double> pv(grid.size());
  std::vector<std::array<double, 3>> xs(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    pv[c] = p.at_cell(grid, c);
    xs[c] = grid.center(grid.unravel(c));
  }
  LogHolderReport rep;
  auto visit = [&](std::size_t i, std::size_t j) {
    double d2 = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double d = xs[i][a] - xs[j][a];
      d2 += d * d;
    }
    const double d = std::sqrt(d2);
    if (d <= 0.0 || d >= 1.0) return;
    ++rep.pairs_examined;
    rep.sup_modulus = std::max(rep.sup_modulus, std::abs(pv[i] - pv[j]) * std::log(1.0 / d));
  };
  const std::size_t n = grid.size();
  if (grid.dim == 1 && n < 512) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < random_pairs; ++k) visit(pick(rng), pick(rng));
  }
  rep.satisfied = std::isfinite(rep.sup_modulus) && rep.sup_modulus < cap;
  return rep;
}

}  // namespace pxlab
