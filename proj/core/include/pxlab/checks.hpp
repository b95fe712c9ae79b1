#pragma once

#include <string>
#include <vector>

#include "pxlab/simulator.hpp"
#include "pxlab/theory.hpp"

namespace pxlab {

enum class Verdict { pass, fail, inconclusive, incompatible };
std::string to_string(Verdict v);

/// Outcome of a trajectory-level inequality check. Margins are positive when
/// the inequality holds with room to spare.
struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::inconclusive;
  double worst_margin = 0.0;
  std::vector<double> times;
  std::vector<double> margins;
  std::string note;

  bool passed() const { return verdict == Verdict::pass; }
};

/// |E(t2) - E(t1) + sum dt ||u_t||^2| over the steps between the records nearest t1 and t2.
double dissipation_residual(const SimResult& result, double t1, double t2);

/// E non-increasing between consecutive records within 10 dt max ||u_t||^2.
CheckResult check_energy_monotone(const SimResult& result);

/// ||u(t)||_inf <= (||u0||_inf^(2-r) + (1 - r/2) t)^(1/(2-r)) with relative slack 1e-3. Rejects r >= 2.
CheckResult check_linf_bound(const SimResult& result, double r);

/// ||u(t)||_2 <= g(t)^(1/(2-p+)) for t < T1 and extinction by T1 (1 + tol).
CheckResult check_l2_envelope(const SimResult& result, const ExtinctionConstants& e, double tol = 0.05);

/// int |grad u|^p >= alpha2 and int |u|^r >= B1^r max{alpha2^(r/p-), alpha2^(r/p+)} before the event.
CheckResult check_lemma24(const SimResult& result, double alpha2, double B1, double p_minus, double p_plus,
                          double r, double slack = 0.01);

/// Record-to-record slope of G_half against C0 G_half^(r/2).
CheckResult check_superlinear_growth(const SimResult& result, double C0, double r, double tol = 0.05);

/// Blow-up observed no later than the bound.
CheckResult check_blow_up_time(const SimResult& result, double T_star);

/// ||u||_2 non-decreasing; with `floor_rate` > 0 also G_half(t) >= G_half(0) e^(floor_rate t) (1 - slack).
CheckResult check_l2_growth(const SimResult& result, double floor_rate = 0.0, double slack = 0.01);

}  // namespace pxlab
