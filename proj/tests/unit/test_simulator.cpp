#include <cmath>
#include <cstring>
#include <numbers>

#include "doctest.h"
#include "pxlab/checks.hpp"
#include "pxlab/error.hpp"
#include "pxlab/simulator.hpp"

using namespace pxlab;
using std::numbers::pi;

namespace {

SimConfig heat_config(int n) {
  SimConfig c;
  c.grid = Grid::uniform(1, n);
  c.exponent = ExponentField::constant(2.0);
  c.source.kind = SourceKind::none;
  c.initial = {"sine", 1.0};
  c.t_max = 0.1;
  return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("stable_dt reproduces the heat CFL limit") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto g = Grid::uniform(dim, 8);
    const ScalarField u(g);
    const auto p = sample(ExponentField::constant(2.0), g);
    const double h = g.spacing(0);
    CHECK(stable_dt(u, p, 2.0, 0.5, 0.0) == doctest::Approx(0.5 * h * h / (2 * dim)).epsilon(1e-14));
  }
  const auto g1 = Grid::uniform(1, 32), g2 = Grid::uniform(1, 64);
  const auto p1 = sample(ExponentField::constant(2.0), g1), p2 = sample(ExponentField::constant(2.0), g2);
  CHECK(stable_dt(ScalarField(g1), p1, 2.0, 1.0, 0.0) ==
        doctest::Approx(4.0 * stable_dt(ScalarField(g2), p2, 2.0, 1.0, 0.0)).epsilon(1e-14));
  CHECK_THROWS(stable_dt(ScalarField(g1), p1, 2.0, 0.0, 0.0));
}

TEST_CASE("stable_dt near blow-up follows the source bound") {
  const auto g = Grid::uniform(1, 64);
  const auto u = make_initial(g, {"sine", 1e6});
  const auto p = sample(ExponentField::constant(2.0), g);
  double umax = 0.0;
  for (double v : u.values) umax = std::max(umax, std::abs(v));
  const double rmax = 2.5 * std::pow(umax, 1.5);
  const double expected = 0.5 * std::min(g.spacing(0) * g.spacing(0) / 2.0, 1.0 / (rmax + 1e-12));
  CHECK(stable_dt(u, p, 3.5, 0.5, kDefaultEpsReg) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(stable_dt(u, p, 3.5, 0.5, kDefaultEpsReg) <= 0.5 / (2.5 * std::pow(1e6, 1.5)) * 1.01);
}

TEST_CASE("forward Euler step") {
  auto c = heat_config(64);
  const ScalarField zero(c.grid);
  for (double v : step(zero, c, 1e-4).values) CHECK(v == 0.0);
  c.source.kind = SourceKind::standard;
  c.r = 3.0;
  for (double v : step(zero, c, 1e-4).values) CHECK(v == 0.0);

  c = heat_config(64);
  const auto u = make_initial(c.grid, {"sine", 1.0});
  const double h = c.grid.spacing(0);
  const double lam = 2.0 / (h * h) * (1.0 - std::cos(pi * h));
  const double dt = 1e-4;
  const auto next = step(u, c, dt);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(next[i] == doctest::Approx((1.0 - dt * lam) * u[i]).epsilon(1e-12));
}

TEST_CASE("mirror-symmetric data stays symmetric") {
  SimConfig c;
  c.grid = Grid::uniform(1, 33);
  c.r = 2.5;
  c.t_max = 0.02;
  c.scheme = Scheme::explicit_euler;
  std::vector<double> pv(33), u0(33);
  for (int i = 0; i <= 16; ++i) {
    const double x = c.grid.center(0, i);
    pv[i] = pv[32 - i] = 1.7 + 0.5 * x;
    u0[i] = u0[32 - i] = 2.0 * x * (1.3 - x);
  }
  c.exponent = ExponentField::sampled(pv);
  c.initial_field = ScalarField(c.grid, u0);
  const auto res = run(c);
  REQUIRE(res.steps > 10);
  for (int i = 0; i < 33; ++i) CHECK(same_bits(res.final_field[i], res.final_field[32 - i]));
}

TEST_CASE("heat decay and zero data") {
  auto c = heat_config(64);
  const auto res = run(c);
  CHECK(res.event.kind == EventKind::none);
  for (std::size_t k = 1; k < res.records.size(); ++k) {
    CHECK(res.records[k].G_half <= res.records[k - 1].G_half);
    CHECK(res.records[k].t > res.records[k - 1].t);
  }
  CHECK(res.records.back().t == doctest::Approx(c.t_max));

  c.initial = {"zero", 0.0};
  const auto z = run(c);
  CHECK(z.event.kind == EventKind::none);
  CHECK(dissipation_residual(z, 0.0, c.t_max) == 0.0);
  for (double v : z.final_field.values) CHECK(v == 0.0);
}

TEST_CASE("record invariants") {
  SimConfig c;
  c.grid = Grid::uniform(1, 64);
  c.exponent = ExponentField::sinusoidal(1.6, 0.3);
  c.r = 3.0;
  c.initial = {"sine", 0.5};
  c.E1 = 10.0;
  c.t_max = 0.05;
  const auto res = run(c);
  for (const auto& rec : res.records) {
    CHECK(rec.G_sq == 2.0 * rec.G_half);
    CHECK(rec.grad_modular >= 0.0);
    CHECK(rec.lr >= 0.0);
    CHECK(rec.linf >= 0.0);
  }
  for (std::size_t k = 1; k < res.records.size(); ++k) CHECK(res.records[k].H >= res.records[k - 1].H - 1e-12);
  CHECK(check_energy_monotone(res).passed());
}

TEST_CASE("output interval lands on exact multiples") {
  auto c = heat_config(32);
  c.output_interval = 0.025;
  const auto res = run(c);
  REQUIRE(res.records.size() == 5);
  for (std::size_t k = 0; k < res.records.size(); ++k)
    CHECK(res.records[k].t == doctest::Approx(0.025 * k).epsilon(1e-12));
}

TEST_CASE("dissipation identity converges at first order") {
  std::vector<double> residuals;
  for (double dtm : {2e-3, 1e-3, 5e-4, 2.5e-4}) {
    auto c = heat_config(64);
    c.scheme = Scheme::semi_implicit;
    c.t_max = 0.05;
    c.dt_max = dtm;
    c.dt_safety = 1.0;
    c.change_limit = 1e9;
    residuals.push_back(dissipation_residual(run(c), 0.0, 0.05));
  }
  for (std::size_t k = 1; k < residuals.size(); ++k)
    CHECK(std::log2(residuals[k - 1] / residuals[k]) >= 0.9);
  CHECK(residuals.back() < 1e-2);
}

TEST_CASE("sup-norm growth bound for sublinear sources") {
  SimConfig c;
  c.grid = Grid::uniform(1, 128);
  c.exponent = ExponentField::sinusoidal(1.2, 0.1);
  c.r = 1.6;
  c.initial = {"sine", 5.0};
  c.t_max = 0.2;
  auto res = run(c);
  const auto ok = check_linf_bound(res, c.r);
  CHECK(ok.passed());
  CHECK(ok.margins.front() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  for (auto& rec : res.records) rec.linf *= 10.0;
  CHECK_FALSE(check_linf_bound(res, c.r).passed());
  CHECK_THROWS_AS(check_linf_bound(res, 2.0), InvalidArgument);
}

TEST_CASE("runs are bit-reproducible") {
  SimConfig c;
  c.grid = Grid::uniform(2, 16);
  c.exponent = ExponentField::sinusoidal(1.5, 0.4);
  c.r = 2.5;
  c.initial = {"sine", 2.0};
  c.t_max = 0.05;
  const auto a = run(c);
  const auto b = run(c);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(same_bits(a.records[k].E, b.records[k].E));
    CHECK(same_bits(a.records[k].t, b.records[k].t));
  }
  for (std::size_t i = 0; i < a.final_field.size(); ++i) CHECK(same_bits(a.final_field[i], b.final_field[i]));
}

TEST_CASE("blow-up is detected at the threshold crossing") {
  SimConfig c;
  c.grid = Grid::uniform(1, 64);
  c.exponent = ExponentField::constant(1.8);
  c.r = 3.5;
  c.initial = {"sine", 30.0};
  c.t_max = 1.0;
  const auto res = run(c);
  REQUIRE(res.event.kind == EventKind::blow_up);
  CHECK(res.event.time > 0.0);
  CHECK(res.event.time <= c.t_max);
  CHECK(res.records.back().linf >= c.blow_up_threshold);
}

TEST_CASE("configuration validation") {
  SimConfig c;
  c.t_max = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SimConfig{};
  c.r = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SimConfig{};
  c.dt_safety = 1.5;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}
