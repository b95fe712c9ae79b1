#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pxlab/error.hpp"
#include "pxlab/linear_solver.hpp"
#include "pxlab/operators.hpp"

using namespace pxlab;
using std::numbers::pi;

namespace {

ScalarField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField u(g);
  for (auto& v : u.values) v = d(rng);
  return u;
}

/// Classical 3/5/7-point Laplacian with ghost value -u beyond each wall.
ScalarField classical_laplacian(const ScalarField& u) {
  const Grid& g = u.grid;
  ScalarField out(g);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const auto idx = g.unravel(c);
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double h = g.spacing(a);
      auto nb = [&](int shift) {
        auto j = idx;
        j[a] += shift;
        if (j[a] < 0 || j[a] >= g.cells[a]) return -u[c];
        return u[g.index(j[0], j[1], j[2])];
      };
      const double fr = (nb(1) - u[c]) / h;
      const double fl = (u[c] - nb(-1)) / h;
      acc += (fr - fl) / h;
    }
    out[c] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("grid construction and indexing") {
  const std::array<int, 3> cells{4, 5, 6};
  const std::array<double, 3> ext{1.0, 2.0, 3.0};
  const auto g = Grid::make(std::span<const int>(cells.data(), 3), std::span<const double>(ext.data(), 3));
  CHECK(g.size() == 120);
  CHECK(g.spacing(1) == doctest::Approx(0.4));
  CHECK(g.measure() == doctest::Approx(6.0));
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto i = g.unravel(f);
    CHECK(g.index(i[0], i[1], i[2]) == f);
  }
  CHECK(g.index(1, 0, 0) == 1);
  CHECK(g.index(0, 1, 0) == 4);
  CHECK(g.face_count(0) == 5 * 5 * 6);
  const std::array<int, 1> tiny{2};
  const std::array<double, 1> one{1.0};
  CHECK_THROWS_AS(Grid::make(std::span<const int>(tiny.data(), 1), std::span<const double>(one.data(), 1)),
                  InvalidArgument);
}

TEST_CASE("face gradients") {
  const auto z = gradient_faces(ScalarField(Grid::uniform(2, 5)));
  for (int a = 0; a < 2; ++a)
    for (double v : z.magnitude[a]) CHECK(v == 0.0);

  const auto lin = ScalarField::from_function(Grid::uniform(1, 4), [](const auto& x) { return x[0]; });
  const auto g = gradient_faces(lin);
  REQUIRE(g.normal[0].size() == 5);
  for (int f = 1; f < 4; ++f) CHECK(g.normal[0][f] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.normal[0][0] == doctest::Approx(1.0).epsilon(1e-14));

  const auto plane = ScalarField::from_function(Grid::uniform(2, 6), [](const auto& x) { return x[0] + x[1]; });
  const auto gp = gradient_faces(plane);
  const Grid& gr = plane.grid;
  for (int a = 0; a < 2; ++a)
    for (std::size_t f = 0; f < gr.face_count(a); ++f) {
      const auto idx = gr.unravel_face(a, f);
      if (idx[a] == 0 || idx[a] == gr.cells[a]) continue;
      CHECK(gp.normal[a][f] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("p-Laplacian with p = 2 reduces to the classical Laplacian") {
  const auto quad = ScalarField::from_function(Grid::uniform(1, 32), [](const auto& x) { return x[0] * (1 - x[0]); });
  const auto p2 = sample(ExponentField::constant(2.0), quad.grid);
  const auto lq = px_laplacian(quad, p2, 0.0);
  for (std::size_t i = 1; i + 1 < lq.size(); ++i) CHECK(lq[i] == doctest::Approx(-2.0).epsilon(1e-10));

  for (int dim = 1; dim <= 3; ++dim) {
    const auto g = Grid::uniform(dim, dim == 3 ? 5 : 9);
    const auto u = random_field(g, 11 + dim);
    const auto a = px_laplacian(u, sample(ExponentField::constant(2.0), g), 0.0);
    const auto b = classical_laplacian(u);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(a[i] == b[i]);
  }
  const auto zero = ScalarField(Grid::uniform(2, 7));
  for (double v : px_laplacian(zero, sample(ExponentField::constant(1.5), zero.grid)).values) CHECK(v == 0.0);
}

TEST_CASE("p-Laplacian with p = 4 matches the closed form") {
  const int n = 512;
  const auto u = ScalarField::from_function(Grid::uniform(1, n), [](const auto& x) { return std::sin(pi * x[0]); });
  const auto l = px_laplacian(u, sample(ExponentField::constant(4.0), u.grid), 0.0);
  double err = 0.0;
  for (int i = 4; i < n - 4; ++i) {
    const double x = u.grid.center(0, i);
    const double d1 = pi * std::cos(pi * x);
    const double d2 = -pi * pi * std::sin(pi * x);
    err = std::max(err, std::abs(l[i] - 3.0 * d1 * d1 * d2));
  }
  CHECK(err < 50.0 / (n * n) * std::pow(pi, 4));
}

TEST_CASE("discrete divergence theorem") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto g = Grid::uniform(dim, dim == 3 ? 6 : 10);
    const auto u = random_field(g, 5 + dim);
    const auto p = sample(ExponentField::sinusoidal(1.6, 0.5), g);
    const auto grad = gradient_faces(u);
    const auto d = face_diffusivity(grad, p, kDefaultEpsReg);
    const auto lap = flux_divergence(grad, d);
    double total = 0.0;
    for (double v : lap.values) total += v * g.cell_volume();
    CHECK(total == doctest::Approx(boundary_flux(grad, d)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("constant field is annihilated away from the walls") {
  const auto u = ScalarField::from_function(Grid::uniform(1, 16), [](const auto&) { return 3.0; });
  const auto l = px_laplacian(u, sample(ExponentField::sinusoidal(1.5, 0.4), u.grid));
  for (int i = 1; i < 15; ++i) CHECK(l[i] == 0.0);
  CHECK(l[0] < 0.0);
}

TEST_CASE("source term") {
  CHECK(source_value(0.0, 1.5) == 0.0);
  CHECK(source_value(2.0, 3.0) == 4.0);
  CHECK(source_value(-0.5, 1.5) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-15));
  const auto u = random_field(Grid::uniform(2, 6), 3);
  ScalarField neg = u;
  for (auto& v : neg.values) v = -v;
  for (double r : {1.3, 2.0, 3.5}) {
    const auto a = source_term(u, r);
    const auto b = source_term(neg, r);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(b[i] == -a[i]);
  }
}

TEST_CASE("lagged operator applies minus the p-Laplacian and solves its shifted system") {
  for (int dim = 1; dim <= 2; ++dim) {
    const auto g = Grid::uniform(dim, 12);
    const auto u = random_field(g, 21 + dim);
    const auto p = sample(ExponentField::sinusoidal(1.4, 0.6), g);
    const auto grad = gradient_faces(u);
    const auto d = face_diffusivity(grad, p, kDefaultEpsReg);
    const LaggedOperator op(g, d);
    const auto au = op.apply(u);
    const auto lap = flux_divergence(grad, d);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(au[i] == doctest::Approx(-lap[i]).epsilon(1e-11).scale(1.0));

    const double dt = 0.01;
    const auto rhs = random_field(g, 99);
    const auto x = op.solve(1.0, dt, rhs);
    const auto ax = op.apply(x);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(x[i] + dt * ax[i] == doctest::Approx(rhs[i]).epsilon(1e-9));
  }
}
