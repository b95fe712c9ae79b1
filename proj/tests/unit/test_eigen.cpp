#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pxlab/checks.hpp"
#include "pxlab/eigen.hpp"
#include "pxlab/error.hpp"

using namespace pxlab;
using std::numbers::e;
using std::numbers::pi;

namespace {

double correlation(const ScalarField& a, const ScalarField& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

SimConfig nonextinction_config() {
  SimConfig c;
  c.grid = Grid::uniform(1, 128);
  c.exponent = ExponentField::sinusoidal(1.8, 0.2);
  c.r = 1.5;
  c.initial = {"constant", 1.0};
  c.t_max = 1.0;
  c.output_interval = 0.05;
  c.keep_snapshots = true;
  return c;
}

}  // namespace

TEST_CASE("first eigenpair of the Laplacian") {
  const auto g = Grid::uniform(1, 256);
  const auto pair = first_eigenpair(g, ExponentField::constant(2.0));
  CHECK(pair.converged);
  CHECK(pair.lambda1 == doctest::Approx(pi * pi).epsilon(0.01));
  CHECK(pair.residual <= 1e-6);
  const auto s = ScalarField::from_function(g, [](const auto& x) { return std::sin(pi * x[0]); });
  CHECK(correlation(pair.phi, s) >= 0.999);
  for (double v : pair.phi.values) CHECK(v > 0.0);

  const auto g2 = Grid::uniform(2, 48);
  const auto pair2 = first_eigenpair(g2, ExponentField::constant(2.0));
  CHECK(pair2.lambda1 == doctest::Approx(2 * pi * pi).epsilon(0.02));
}

TEST_CASE("quotient is scale invariant at constant p") {
  const auto g = Grid::uniform(1, 64);
  for (double q : {1.5, 2.0, 3.0}) {
    const auto p = sample(ExponentField::constant(q), g);
    const auto phi = ScalarField::from_function(g, [](const auto& x) { return x[0] * (1 - x[0]) + 0.1; });
    const double base = rayleigh_quotient(phi, p);
    for (double c : {0.5, 2.0}) {
      ScalarField s = phi;
      for (auto& v : s.values) v *= c;
      CHECK(rayleigh_quotient(s, p) == doctest::Approx(base).epsilon(1e-13));
    }
  }
}

TEST_CASE("variable-exponent eigenpair") {
  const auto g = Grid::uniform(1, 128);
  const auto pair = first_eigenpair(g, ExponentField::sinusoidal(1.8, 0.2));
  CHECK(pair.converged);
  CHECK(pair.residual <= 1e-6);
  CHECK(pair.lambda1 > 0.0);
  for (double v : pair.phi.values) CHECK(v > 0.0);
  CHECK(eigen_residual(pair.phi, sample(ExponentField::sinusoidal(1.8, 0.2), g), pair.lambda1) ==
        doctest::Approx(pair.residual).epsilon(1e-9));

  double prev_gap = 1e300;
  for (int n : {16, 32, 64}) {
    const auto pr = first_eigenpair(Grid::uniform(1, n), ExponentField::constant(2.0));
    const double h = 1.0 / n;
    CHECK(pr.lambda1 == doctest::Approx(2.0 / (h * h) * (1.0 - std::cos(pi * h))).epsilon(1e-8));
    const double gap = std::abs(pr.lambda1 - pi * pi);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("epsilon bounds") {
  const auto g = Grid::uniform(1, 16);
  EigenPair pair;
  pair.lambda1 = 1.0;
  pair.M = 1.0;
  pair.phi = ScalarField::from_function(g, [](const auto&) { return 1.0; });
  const auto u0 = ScalarField::from_function(g, [](const auto&) { return 1.0; });
  const double b = epsilon_bound(pair, u0, 1.2, 1.5);
  CHECK(b == doctest::Approx(std::pow(2.0, -0.3) / e).epsilon(1e-14));
  CHECK(b == doctest::Approx(0.2987).epsilon(1e-3));
  CHECK(b < 1.0);
  const auto u10 = ScalarField::from_function(g, [](const auto&) { return 10.0; });
  CHECK(epsilon_bound(pair, u10, 1.2, 1.5) == b);
  CHECK(epsilon_sufficient_bound(pair, u0, 1.2, 1.5) == doctest::Approx(std::pow(2.0, 1.0 / -0.3) / e));

  ScalarField dip = u0;
  dip[3] = 0.0;
  CHECK_THROWS_AS(epsilon_bound(pair, dip, 1.2, 1.5), InvalidArgument);
  CHECK_THROWS_AS(epsilon_bound(pair, u0, 1.6, 1.5), InvalidArgument);
}

TEST_CASE("barrier profile") {
  const auto g = Grid::uniform(1, 32);
  const auto pair = first_eigenpair(g, ExponentField::constant(1.9));
  const double eps = 0.1, T = 2.0;
  const auto w0 = barrier(pair, eps, T, 0.0);
  const auto wh = barrier(pair, eps, T, 1.0);
  const auto wT = barrier(pair, eps, T, T);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(wT[i] == doctest::Approx(eps * pair.phi[i]).epsilon(1e-15));
    CHECK(w0[i] == doctest::Approx(e * eps * pair.phi[i]).epsilon(1e-15));
    CHECK(wh[i] / w0[i] == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(wh[i] < w0[i]);
    CHECK(wT[i] < wh[i]);
  }
}

TEST_CASE("barrier inequality and ordering on the non-extinction scenario") {
  auto c = nonextinction_config();
  const auto p = sample(c.exponent, c.grid);
  const auto pair = first_eigenpair(c.grid, c.exponent);
  REQUIRE(pair.converged);
  const auto u0 = make_initial(c.grid, c.initial);
  const double pm = p.p_minus;
  const double printed = epsilon_bound(pair, u0, c.r, pm);
  const double sufficient = epsilon_sufficient_bound(pair, u0, c.r, pm);
  const double eps = 0.5 * std::min(printed, sufficient);

  const auto ok = check_barrier_inequality(pair, eps, p, c.r, c.t_max);
  CHECK(ok.holds);
  CHECK(ok.worst_margin <= 0.0);
  CHECK_FALSE(check_barrier_inequality(pair, 10.0 * printed, p, c.r, c.t_max).holds);
  const auto zero = check_barrier_inequality(pair, 0.0, p, c.r, c.t_max);
  CHECK(zero.holds);
  CHECK(zero.worst_margin == 0.0);

  const auto main = run(c);
  auto ca = c;
  ca.source.kind = SourceKind::barrier_auxiliary;
  ca.source.epsilon = eps;
  ca.source.lambda1 = pair.lambda1;
  ca.source.phi = pair.phi.values;
  const auto aux = run(ca);
  const auto order = check_ordering(main, aux, pair, eps, c.t_max);
  CHECK(order.passed());
  CHECK(order.margins.front() >= 0.0);

  auto cd = c;
  cd.source.kind = SourceKind::none;
  const auto diffusion_only = run(cd);
  CHECK_FALSE(check_ordering(diffusion_only, aux, pair, eps, c.t_max).passed());

  auto other = c;
  other.grid = Grid::uniform(1, 64);
  CHECK_THROWS(check_ordering(run(other), aux, pair, eps, c.t_max));
}
