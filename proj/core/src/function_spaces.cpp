#include "pxlab/function_spaces.hpp"

#include <algorithm>
#include <cmath>

#include "pxlab/error.hpp"
#include "pxlab/operators.hpp"

namespace pxlab {

double ModularTerms::evaluate(double lambda) const {
  double s = 0.0;
  if (lambda == 1.0) {
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * std::pow(values[i], exponents[i]);
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * std::pow(values[i] / lambda, exponents[i]);
  }
  return s;
}

ModularTerms cell_terms(const ScalarField& u, const ExponentSamples& p) {
  if (!(u.grid == p.grid)) throw InvalidArgument("field and exponent samples use different grids");
  ModularTerms t;
  const double w = u.grid.cell_volume();
  t.values.resize(u.size());
  t.exponents = p.cell;
  t.weights.assign(u.size(), w);
  for (std::size_t c = 0; c < u.size(); ++c) t.values[c] = std::abs(u[c]);
  return t;
}

ModularTerms gradient_terms(const FaceVectorField& g, const ExponentSamples& p) {
  const Grid& grid = g.grid;
  ModularTerms t;
  for (int a = 0; a < grid.dim; ++a) {
    for (std::size_t f = 0; f < g.magnitude[a].size(); ++f) {
      const int coord = grid.unravel_face(a, f)[a];
      t.values.push_back(g.magnitude[a][f]);
      t.exponents.push_back(p.face[a][f]);
      t.weights.push_back(face_weight(grid, a, coord) / grid.dim);
    }
  }
  return t;
}

double modular(const ScalarField& u, const ExponentSamples& p) { return cell_terms(u, p).evaluate(); }

double luxemburg_norm(const ModularTerms& terms, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("Luxemburg tolerance must be positive");
  const double m = terms.evaluate();
  if (!std::isfinite(m)) throw NumericalError("modular is not finite");
  if (m == 0.0) return 0.0;

  double pm = kInfinity, pp = 0.0;
  for (std::size_t i = 0; i < terms.values.size(); ++i) {
    if (terms.values[i] == 0.0 || terms.weights[i] == 0.0) continue;
    pm = std::min(pm, terms.exponents[i]);
    pp = std::max(pp, terms.exponents[i]);
  }
  // rho(u) >= 1: lambda^p- <= rho <= lambda^p+; reversed below 1
  double lo = m >= 1.0 ? std::pow(m, 1.0 / pp) : std::pow(m, 1.0 / pm);
  double hi = m >= 1.0 ? std::pow(m, 1.0 / pm) : std::pow(m, 1.0 / pp);
  if (lo == hi) return lo;

  auto f = [&](double lambda) { return terms.evaluate(lambda); };
  int doublings = 0;
  while (!(f(lo) >= 1.0)) {
    lo *= 0.5;
    if (++doublings > 200) throw NumericalError("Luxemburg bracket could not be established");
  }
  doublings = 0;
  while (!(f(hi) <= 1.0)) {
    hi *= 2.0;
    if (++doublings > 200) throw NumericalError("Luxemburg bracket could not be established");
  }
  for (int it = 0; it < 400 && hi - lo > tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 1.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double luxemburg_norm(const ScalarField& u, const ExponentSamples& p, double tol) {
  return luxemburg_norm(cell_terms(u, p), tol);
}

double gradient_luxemburg_norm(const ScalarField& u, const ExponentSamples& p, double tol) {
  return luxemburg_norm(gradient_terms(gradient_faces(u), p), tol);
}

double lr_norm(const ScalarField& u, double r) {
  if (std::isinf(r) && r > 0) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(r >= 1.0)) throw InvalidArgument("L^r norm needs r >= 1");
  double s = 0.0;
  for (double v : u.values) s += std::pow(std::abs(v), r);
  return std::pow(s * u.grid.cell_volume(), 1.0 / r);
}

double sobolev_exponent(int dim, double p) {
  if (p >= dim) return kInfinity;
  return dim * p / (dim - p);
}

}  // namespace pxlab
