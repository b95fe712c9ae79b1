#include <cmath>
#include <cstring>

#include "doctest.h"
#include "pxlab/error.hpp"
#include "pxlab/theory.hpp"

using namespace pxlab;

TEST_CASE("h(alpha) and the critical constants") {
  CHECK(h_of_alpha(0.0, 1.5, 2.0, 3.0, 1.0) == 0.0);
  const auto unit = critical_constants(1.0, 1.5, 2.0, 3.0);
  CHECK(unit.B1 == 1.0);
  CHECK(unit.alpha1 == 1.0);
  CHECK(unit.E1_peak == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(unit.E1_printed == doctest::Approx(unit.E1_peak).epsilon(1e-15));
  CHECK(h_of_alpha(unit.alpha1, 1.5, 2.0, 3.0, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  for (double d : {0.1, 1.0, 10.0}) CHECK(h_of_alpha(1.0 + d, 1.5, 2.0, 3.0, 1.0) < unit.E1_peak);

  const auto c = critical_constants(2.0, 1.5, 2.0, 4.0);
  CHECK(c.B1 == 2.0);
  CHECK(c.alpha1 == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(c.E1_peak == doctest::Approx(1.0 / 64.0).epsilon(1e-14));
  CHECK(h_of_alpha(c.alpha1, 1.5, 2.0, 4.0, c.B1) == doctest::Approx(c.E1_peak).epsilon(1e-14));
  CHECK(critical_constants(0.3, 1.5, 2.0, 4.0).B1 == 1.0);
  CHECK_THROWS_AS(critical_constants(1.0, 1.5, 2.0, 2.0), InvalidArgument);
}

TEST_CASE("h is unimodal with its peak at alpha1") {
  for (double B : {1.0, 1.7, 3.0}) {
    const double pm = 1.6, pp = 1.9, r = 3.2;
    const auto c = critical_constants(B, pm, pp, r);
    CHECK(c.alpha1 > 0.0);
    CHECK(c.alpha1 <= 1.0);
    double prev = h_of_alpha(c.alpha1 * 1e-3, pm, pp, r, c.B1);
    for (int k = 1; k < 100; ++k) {
      const double a = c.alpha1 * std::pow(10.0, -3.0 + 3.0 * k / 99.0);
      const double h = h_of_alpha(a, pm, pp, r, c.B1);
      CHECK(h >= prev);
      CHECK(h <= c.E1_peak * (1 + 1e-12));
      prev = h;
    }
    prev = c.E1_peak;
    for (int k = 1; k < 100; ++k) {
      const double a = c.alpha1 * std::pow(10.0, 3.0 * k / 99.0);
      const double h = h_of_alpha(a, pm, pp, r, c.B1);
      CHECK(h < prev);
      prev = h;
    }
  }
}

TEST_CASE("alpha2 on the decreasing branch") {
  const auto c = critical_constants(1.0, 2.0, 2.0, 4.0);
  const double a2 = solve_alpha2(0.0, c, 2.0, 2.0, 4.0);
  CHECK(a2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(solve_alpha2(c.E1_peak, c, 2.0, 2.0, 4.0), InvalidArgument);

  const auto v = critical_constants(1.4, 1.7, 1.9, 3.3);
  double prev = v.alpha1;
  for (double E0 : {0.5 * v.E1_peak, 0.0, -0.5, -5.0}) {
    const double a = solve_alpha2(E0, v, 1.7, 1.9, 3.3);
    CHECK(a > prev);
    CHECK(std::abs(h_of_alpha(a, 1.7, 1.9, 3.3, v.B1) - E0) <= 1e-12 * std::max(1.0, std::abs(E0)));
    prev = a;
  }
}

TEST_CASE("blow-up constants") {
  const double pm = 1.8, pp = 1.8, r = 4.0;
  const auto c = critical_constants(0.8, pm, pp, r);
  const double a2 = solve_alpha2(-0.2, c, pm, pp, r);
  const auto k = blow_up_constants(a2, c, c.E1_printed, pm, pp, r, 1.0);
  CHECK(k.C0 == doctest::Approx(k.C0_general_printed).epsilon(1e-12));
  CHECK(k.C0 == doctest::Approx(k.C0_display).epsilon(1e-12));
  const double M = std::max(std::pow(a2, r / pm), std::pow(a2, r / pp));
  const double oracle = (r - pp) / r * (1.0 - 1.0 / M) * std::pow(2.0, r / 2.0);
  CHECK(k.C0 == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(k.positive);
  const auto doubled = blow_up_constants(a2, c, c.E1_printed, pm, pp, r, 2.0);
  CHECK(doubled.C0 == doctest::Approx(k.C0 / 2.0).epsilon(1e-14));

  const auto b = critical_constants(2.5, 1.6, 1.9, 3.4);
  const double b2 = solve_alpha2(0.3 * b.E1_peak, b, 1.6, 1.9, 3.4);
  const auto kb = blow_up_constants(b2, b, b.E1_peak, 1.6, 1.9, 3.4, 1.0);
  CHECK(kb.C0_general_printed == doctest::Approx(kb.C0_display).epsilon(1e-12));
}

TEST_CASE("blow-up time bound") {
  CHECK(blow_up_time_bound(2.0, 0.5, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(blow_up_time_bound(1.0, 0.7, 3.0) == doctest::Approx(1.0 / (0.5 * 0.7)).epsilon(1e-15));
  CHECK(blow_up_time_bound(4.0, 0.5, 4.0) == doctest::Approx(blow_up_time_bound(1.0, 0.5, 4.0) / 4.0).epsilon(1e-15));
  CHECK_THROWS_AS(blow_up_time_bound(1.0, 0.5, 2.0), InvalidArgument);
}

TEST_CASE("extinction constants, r = 2") {
  const double pm = 1.3, pp = 1.4;
  const auto e = extinction_constants(0.02, 0.19, pm, pp, 2.0, 1.0, 1);
  CHECK(e.g(0.0) == doctest::Approx(std::pow(0.02, 2.0 - pp)).epsilon(1e-15));
  CHECK(e.envelope(0.0) == doctest::Approx(0.02).epsilon(1e-14));
  const double K1 = (2 - pp) / (2 - pm) * 0.19 * std::min(1.0, std::pow(0.02, pm - pp));
  CHECK(e.K1 == doctest::Approx(K1).epsilon(1e-15));
  REQUIRE(e.small_data);
  CHECK(std::isfinite(e.T1));
  CHECK(std::abs(e.g(e.T1)) <= 1e-12);
  CHECK(e.envelope(2.0 * e.T1) == 0.0);

  const auto big = extinction_constants(10.0, 0.19, pm, pp, 2.0, 1.0, 1);
  CHECK_FALSE(big.small_data);
  CHECK(std::isinf(big.T1));
  CHECK_THROWS_AS(extinction_constants(0.05, 0.19, 1.5, 1.4, 2.0, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(extinction_constants(0.05, 0.19, 1.3, 1.4, 2.1, 1.0, 1), InvalidArgument);
  CHECK_THROWS_AS(extinction_constants(0.05, 0.19, 1.1, 1.4, 2.0, 1.0, 3), InvalidArgument);
}

TEST_CASE("extinction constants, 1 < r < 2") {
  const double pm = 1.3, pp = 1.4, r = 1.8;
  double prev = 0.0;
  bool first = true;
  for (double a : {0.004, 0.002, 0.001}) {
    const auto e = extinction_constants(a, 0.19, pm, pp, r, 1.0, 1);
    const double F = (2 - pp) * (2.0 * std::pow(a, r - pp) - 0.095 * std::min(std::pow(a, pm - pp), 1.0));
    CHECK(e.F_u0 == doctest::Approx(F).epsilon(1e-14));
    if (!first) CHECK(e.F_u0 < prev);
    prev = e.F_u0;
    first = false;
    CHECK(e.g(0.0) == doctest::Approx(std::pow(a, 2 - pp)).epsilon(1e-15));
    if (e.small_data) CHECK(e.T1 == doctest::Approx(e.y0 / -e.F_u0).epsilon(1e-15));
  }
}

TEST_CASE("C1 from the L2 embedding constant") {
  CHECK(derive_C1(1.0, 1.3, 1.4) == 0.5);
  CHECK(derive_C1(2.0, 1.3, 1.4) == doctest::Approx(0.5 * std::pow(2.0, -1.4)).epsilon(1e-15));
  CHECK(derive_C1(2.0, 1.3, 1.4) == doctest::Approx(0.1895).epsilon(1e-3));
  CHECK(derive_C1(0.5, 1.3, 1.4) == doctest::Approx(0.5 * std::pow(0.5, -1.3)).epsilon(1e-15));
}

TEST_CASE("comparison ODE") {
  const auto flat = comparison_ode(0.7, 0.0, 0.0, 1.4, 1.8, 1e-3, 1.0);
  for (double y : flat.y) CHECK(y == 0.7);
  CHECK(std::isinf(flat.hitting_time));

  const double A = 2.0, y0 = 0.5, pp = 1.4;
  const auto lin = comparison_ode(y0, A, 0.0, pp, 1.8, 1e-3, 5.0);
  const double hit = y0 / ((2 - pp) * A / 2);
  CHECK(lin.hitting_time == doctest::Approx(hit).epsilon(1e-12));
  for (std::size_t k = 0; k < lin.t.size(); ++k)
    if (lin.t[k] < hit) CHECK(lin.y[k] == doctest::Approx(y0 - (2 - pp) * A / 2 * lin.t[k]).epsilon(1e-12));
  CHECK(lin.y.back() == 0.0);

  const auto grow = comparison_ode(0.3, 1.0, 0.5, pp, 1.8, 1e-3, 2.0);
  const double slope0 = (2 - pp) / 2 * (0.5 * std::pow(0.3, (1.8 - pp) / (2 - pp)) - 1.0);
  for (std::size_t k = 0; k < grow.t.size(); ++k) CHECK(grow.y[k] <= 0.3 + slope0 * grow.t[k] + 1e-12);
  CHECK_THROWS_AS(comparison_ode(0.3, 1.0, 0.5, 2.0, 1.8, 1e-3, 2.0), InvalidArgument);
}

TEST_CASE("fast-diffusion constants") {
  const auto f = fast_diffusion_constants(3, 1.1, 1.1);
  CHECK(f.s == doctest::Approx(1.6 / 1.1).epsilon(1e-14));
  CHECK(f.s == doctest::Approx(1.4545).epsilon(1e-4));
  CHECK(f.beta == doctest::Approx(0.9 * 1.9 / 1.21).epsilon(1e-14));
  CHECK(f.beta == doctest::Approx(1.4132).epsilon(1e-4));
  CHECK(f.valid);
  CHECK(f.s_positive);
  for (int N : {1, 2})
    for (double pm : {1.01, 1.2, 1.5, 1.9}) CHECK_FALSE(fast_diffusion_constants(N, pm, pm + 0.05).valid);
  CHECK(fast_diffusion_constants(3, 1.1, 1.7).valid);
  CHECK_FALSE(fast_diffusion_constants(3, 1.1, 1.8).valid);

  CHECK(std::isinf(fast_diffusion_T3(f, 3, 1.1, 1.1, 1.0, 1.0, 2.0)));
  const double T3 = fast_diffusion_T3(f, 3, 1.1, 1.1, 5.0, 1.0, 1e-3);
  CHECK(std::isfinite(T3));
  CHECK(T3 > 0.0);
}

TEST_CASE("constants are bit-reproducible") {
  TheoryInputs in;
  in.dim = 2;
  in.p_minus = in.p_plus = 1.8;
  in.r = 3.5;
  in.B = 0.4;
  in.C2 = 0.3;
  in.initial.E = -1.0;
  in.initial.G_half = 2.0;
  in.grad_norm_p = 5.0;
  in.u0_linf = 10.0;
  const auto a = compute_theory(in);
  const auto b = compute_theory(in);
  for (auto q : {&TheoryConstants::alpha1, &TheoryConstants::alpha2, &TheoryConstants::C0, &TheoryConstants::T_star}) {
    REQUIRE((a.*q).defined());
    CHECK(std::memcmp(&(a.*q).value, &(b.*q).value, sizeof(double)) == 0);
  }
  CHECK(a.alpha2.value > a.alpha1.value);
  CHECK(a.B1.value >= 1.0);
  CHECK(a.T_star.value > 0.0);
  const auto report = classify_regime(in, a);
  CHECK(report.at("H2").holds);
  CHECK(report.regime == Regime::blow_up);
}

TEST_CASE("regime windows") {
  TheoryInputs in;
  in.dim = 1;
  in.p_minus = 1.8;
  in.p_plus = 2.0;
  in.r = 1.5;
  in.u0_min = 1.0;
  in.u0_linf = 1.0;
  in.initial.G_half = 0.5;
  in.grad_norm_p = 1.0;
  auto rep = classify_regime(in, compute_theory(in));
  CHECK(rep.at("H10").holds);
  CHECK(rep.regime == Regime::non_extinction);

  in.p_minus = 1.3;
  in.p_plus = 1.4;
  in.r = 1.35;
  in.u0_min = 0.0;
  rep = classify_regime(in, compute_theory(in));
  CHECK(rep.regime == Regime::unknown);
  CHECK_FALSE(rep.explanation.empty());
}
