#include "pxlab/operators.hpp"

#include <cmath>

#include "pxlab/error.hpp"

namespace pxlab {
namespace {

std::size_t cell_at(const Grid& g, const std::array<int, 3>& idx) { return g.index(idx[0], idx[1], idx[2]); }

// Central difference of u along `axis` at cell `idx`, ghost value -u beyond a wall.
double central_difference(const ScalarField& u, const std::array<int, 3>& idx, int axis) {
  const Grid& g = u.grid;
  const double uc = u[cell_at(g, idx)];
  auto up = idx;
  auto dn = idx;
  up[axis] += 1;
  dn[axis] -= 1;
  const double vu = up[axis] < g.cells[axis] ? u[cell_at(g, up)] : -uc;
  const double vd = dn[axis] >= 0 ? u[cell_at(g, dn)] : -uc;
  return (vu - vd) / (2.0 * g.spacing(axis));
}

double normal_gradient(const ScalarField& u, int axis, const std::array<int, 3>& fidx) {
  const Grid& g = u.grid;
  const double h = g.spacing(axis);
  const int f = fidx[axis];
  auto left = fidx;
  left[axis] = f - 1;
  if (f == 0) return (u[cell_at(g, fidx)] - 0.0) / (0.5 * h);
  if (f == g.cells[axis]) return (0.0 - u[cell_at(g, left)]) / (0.5 * h);
  return (u[cell_at(g, fidx)] - u[cell_at(g, left)]) / h;
}

double tangential_gradient(const ScalarField& u, int axis, const std::array<int, 3>& fidx, int comp) {
  const Grid& g = u.grid;
  const int f = fidx[axis];
  double sum = 0.0;
  int count = 0;
  if (f > 0) {
    auto left = fidx;
    left[axis] = f - 1;
    sum += central_difference(u, left, comp);
    ++count;
  }
  if (f < g.cells[axis]) {
    sum += central_difference(u, fidx, comp);
    ++count;
  }
  return sum / count;
}

}  // namespace

double face_weight(const Grid& grid, int axis, int face_coord) {
  const double v = grid.cell_volume();
  return (face_coord == 0 || face_coord == grid.cells[axis]) ? 0.5 * v : v;
}

std::array<std::array<std::vector<double>, 3>, 3> gradient_components(const ScalarField& u) {
  const Grid& g = u.grid;
  std::array<std::array<std::vector<double>, 3>, 3> comps;
  for (int a = 0; a < g.dim; ++a) {
    const std::size_t nf = g.face_count(a);
    for (int c = 0; c < g.dim; ++c) comps[a][c].resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      const auto idx = g.unravel_face(a, f);
      for (int c = 0; c < g.dim; ++c) {
        comps[a][c][f] = (c == a) ? normal_gradient(u, a, idx) : tangential_gradient(u, a, idx, c);
      }
    }
  }
  return comps;
}

FaceVectorField gradient_faces(const ScalarField& u) {
  const Grid& g = u.grid;
  FaceVectorField out;
  out.grid = g;
  for (int a = 0; a < g.dim; ++a) {
    const std::size_t nf = g.face_count(a);
    out.normal[a].resize(nf);
    out.magnitude[a].resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      const auto idx = g.unravel_face(a, f);
      const double gn = normal_gradient(u, a, idx);
      out.normal[a][f] = gn;
      if (g.dim == 1) {
        out.magnitude[a][f] = std::abs(gn);
        continue;
      }
      double m2 = gn * gn;
      for (int c = 0; c < g.dim; ++c) {
        if (c == a) continue;
        const double gt = tangential_gradient(u, a, idx, c);
        m2 += gt * gt;
      }
      out.magnitude[a][f] = std::sqrt(m2);
    }
  }
  return out;
}

std::array<std::vector<double>, 3> face_diffusivity(const FaceVectorField& g, const ExponentSamples& p,
                                                    double eps_reg) {
  if (eps_reg < 0.0) throw InvalidArgument("eps_reg must be non-negative");
  std::array<std::vector<double>, 3> d;
  const double e2 = eps_reg * eps_reg;
  for (int a = 0; a < g.grid.dim; ++a) {
    const auto& m = g.magnitude[a];
    d[a].resize(m.size());
    for (std::size_t f = 0; f < m.size(); ++f) {
      d[a][f] = std::pow(m[f] * m[f] + e2, 0.5 * (p.face[a][f] - 2.0));
    }
  }
  return d;
}

ScalarField flux_divergence(const FaceVectorField& g, const std::array<std::vector<double>, 3>& diffusivity) {
  const Grid& grid = g.grid;
  ScalarField out(grid);
  std::array<std::vector<double>, 3> flux;
  for (int a = 0; a < grid.dim; ++a) {
    flux[a].resize(g.normal[a].size());
    for (std::size_t f = 0; f < flux[a].size(); ++f) {
      const double gn = g.normal[a][f];
      // |g|^(p-2) g -> 0 as g -> 0 for p > 1, even where D is unbounded
      flux[a][f] = gn == 0.0 ? 0.0 : diffusivity[a][f] * gn;
    }
  }
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto idx = grid.unravel(c);
    double acc = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      auto right = idx;
      right[a] += 1;
      const double fl = flux[a][grid.face_index(a, idx)];
      const double fr = flux[a][grid.face_index(a, right)];
      acc += (fr - fl) / grid.spacing(a);
    }
    out[c] = acc;
  }
  return out;
}

ScalarField px_laplacian(const ScalarField& u, const ExponentSamples& p, double eps_reg) {
  if (!(p.grid == u.grid)) throw InvalidArgument("field and exponent samples use different grids");
  auto g = gradient_faces(u);
  auto out = flux_divergence(g, face_diffusivity(g, p, eps_reg));
  for (double v : out.values) {
    if (!std::isfinite(v)) throw NumericalError("p(x)-Laplacian produced a non-finite value");
  }
  return out;
}

double source_value(double u, double r) {
  if (u == 0.0) return 0.0;
  return std::pow(std::abs(u), r - 2.0) * u;
}

ScalarField source_term(const ScalarField& u, double r) {
  if (!(r > 1.0)) throw InvalidArgument("source exponent r must exceed 1");
  ScalarField out(u.grid);
  for (std::size_t c = 0; c < u.size(); ++c) out[c] = source_value(u[c], r);
  return out;
}

namespace {

template <class F>
double face_quadrature(const FaceVectorField& g, const ExponentSamples& p, F&& integrand) {
  const Grid& grid = g.grid;
  double total = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    const auto& m = g.magnitude[a];
    double axis_sum = 0.0;
    for (std::size_t f = 0; f < m.size(); ++f) {
      const int coord = grid.unravel_face(a, f)[a];
      axis_sum += face_weight(grid, a, coord) * integrand(m[f], p.face[a][f]);
    }
    total += axis_sum;
  }
  return total / grid.dim;
}

}  // namespace

double gradient_modular(const FaceVectorField& g, const ExponentSamples& p) {
  return face_quadrature(g, p, [](double m, double pf) { return std::pow(m, pf); });
}

double gradient_energy(const FaceVectorField& g, const ExponentSamples& p) {
  return face_quadrature(g, p, [](double m, double pf) { return std::pow(m, pf) / pf; });
}

double boundary_flux(const FaceVectorField& g, const std::array<std::vector<double>, 3>& diffusivity) {
  const Grid& grid = g.grid;
  double total = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    const double area = grid.cell_volume() / grid.spacing(a);
    for (std::size_t f = 0; f < g.normal[a].size(); ++f) {
      const int coord = grid.unravel_face(a, f)[a];
      if (coord != 0 && coord != grid.cells[a]) continue;
      const double gn = g.normal[a][f];
      const double flux = gn == 0.0 ? 0.0 : diffusivity[a][f] * gn;
      total += (coord == 0 ? -flux : flux) * area;
    }
  }
  return total;
}

ScalarField gradient_adjoint(const Grid& grid,
                             const std::array<std::array<std::vector<double>, 3>, 3>& cotangent) {
  ScalarField out(grid);
  auto add = [&](const std::array<int, 3>& idx, double v) { out[cell_at(grid, idx)] += v; };
  for (int a = 0; a < grid.dim; ++a) {
    const double ha = grid.spacing(a);
    const std::size_t nf = grid.face_count(a);
    for (std::size_t f = 0; f < nf; ++f) {
      const auto idx = grid.unravel_face(a, f);
      const int fa = idx[a];
      auto left = idx;
      left[a] = fa - 1;
      const bool has_left = fa > 0;
      const bool has_right = fa < grid.cells[a];
      for (int c = 0; c < grid.dim; ++c) {
        const auto& ctv = cotangent[a][c];
        if (ctv.empty()) continue;
        const double ct = ctv[f];
        if (ct == 0.0) continue;
        if (c == a) {
          if (!has_left) {
            add(idx, ct / (0.5 * ha));
          } else if (!has_right) {
            add(left, -ct / (0.5 * ha));
          } else {
            add(idx, ct / ha);
            add(left, -ct / ha);
          }
          continue;
        }
        const double hc = grid.spacing(c);
        const double w = ct / ((has_left ? 1 : 0) + (has_right ? 1 : 0)) / (2.0 * hc);
        auto spread = [&](const std::array<int, 3>& q) {
          auto up = q;
          auto dn = q;
          up[c] += 1;
          dn[c] -= 1;
          if (up[c] < grid.cells[c]) add(up, w); else add(q, -w);
          if (dn[c] >= 0) add(dn, -w); else add(q, w);
        };
        if (has_left) spread(left);
        if (has_right) spread(idx);
      }
    }
  }
  return out;
}

}  // namespace pxlab
