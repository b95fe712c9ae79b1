#include "pxlab/checks.hpp"

#include <algorithm>
#include <cmath>

#include "pxlab/error.hpp"

namespace pxlab {
namespace {

std::size_t nearest_record(const SimResult& res, double t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.records.size(); ++i)
    if (std::abs(res.records[i].t - t) < std::abs(res.records[best].t - t)) best = i;
  return best;
}

void push(CheckResult& c, double t, double m) {
  if (c.margins.empty() || m < c.worst_margin) c.worst_margin = m;
  c.times.push_back(t);
  c.margins.push_back(m);
}

void settle(CheckResult& c) {
  if (c.verdict != Verdict::inconclusive) return;
  c.verdict = c.margins.empty() ? Verdict::inconclusive : (c.worst_margin >= 0.0 ? Verdict::pass : Verdict::fail);
}

// Records strictly before a blow-up event (the crossing record itself is excluded).
std::size_t pre_event_count(const SimResult& res) {
  std::size_t n = res.records.size();
  if (res.event.kind == EventKind::blow_up && n > 1 && res.records.back().t == res.event.time) --n;
  return n;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::incompatible: return "incompatible";
    default: return "inconclusive";
  }
}

double dissipation_residual(const SimResult& result, double t1, double t2) {
  if (result.records.empty()) throw InvalidArgument("no records");
  if (!(t1 < t2)) throw InvalidArgument("dissipation residual needs t1 < t2");
  const auto& a = result.records[nearest_record(result, t1)];
  const auto& b = result.records[nearest_record(result, t2)];
  return std::abs(b.E - a.E + (b.dissipated - a.dissipated));
}

CheckResult check_energy_monotone(const SimResult& result) {
  CheckResult c;
  c.name = "dissipation";
  const std::size_t n = pre_event_count(result);
  double widest = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto& prev = result.records[i - 1];
    const auto& cur = result.records[i];
    const double slack = 10.0 * cur.dt * std::max(prev.ut_l2sq, cur.ut_l2sq);
    widest = std::max(widest, slack);
    push(c, cur.t, prev.E - cur.E + slack);
  }
  if (n <= 1) c.verdict = Verdict::pass;
  c.note = "largest slack " + std::to_string(widest);
  settle(c);
  return c;
}

CheckResult check_linf_bound(const SimResult& result, double r) {
  if (!(r < 2.0)) throw InvalidArgument("the L^inf bound needs r < 2");
  CheckResult c;
  c.name = "linf_bound";
  if (result.records.empty()) return c;
  double u0 = result.records.front().linf;
  if (result.initial_field.size() > 0) {
    u0 = 0.0;
    for (double v : result.initial_field.values) u0 = std::max(u0, std::abs(v));
  }
  constexpr double slack = 1e-3;
  bool ok = true;
  for (const auto& rec : result.records) {
    const double bound = std::pow(std::pow(u0, 2.0 - r) + (1.0 - r / 2.0) * rec.t, 1.0 / (2.0 - r));
    const double margin = bound > 0.0 ? (bound - rec.linf) / bound : -rec.linf;
    ok = ok && margin >= -slack;
    push(c, rec.t, margin);
  }
  c.verdict = ok ? Verdict::pass : Verdict::fail;
  return c;
}

CheckResult check_l2_envelope(const SimResult& result, const ExtinctionConstants& e, double tol) {
  CheckResult c;
  c.name = "l2_envelope";
  if (!e.small_data) {
    c.verdict = Verdict::incompatible;
    c.note = "initial data not small enough for the envelope";
    return c;
  }
  for (const auto& rec : result.records) {
    if (!(rec.t < e.T1)) break;
    const double l2 = std::sqrt(rec.G_sq);
    const double env = e.envelope(rec.t);
    push(c, rec.t, env * (1.0 + 1e-9) - l2);
  }
  const double deadline = e.T1 * (1.0 + tol);
  if (result.event.kind == EventKind::extinction) {
    c.note = "extinction at " + std::to_string(result.event.time) + ", T1 " + std::to_string(e.T1);
    if (result.event.time > deadline) c.verdict = Verdict::fail;
  } else if (!result.records.empty() && result.records.back().t >= deadline) {
    c.note = "no extinction by T1 (1 + tol)";
    c.verdict = Verdict::fail;
  } else {
    c.note = "horizon ends before T1; envelope only";
  }
  settle(c);
  return c;
}

CheckResult check_lemma24(const SimResult& result, double alpha2, double B1, double p_minus, double p_plus,
                          double r, double slack) {
  CheckResult c;
  c.name = "lemma24";
  const double floor_r = std::pow(B1, r) * std::max(std::pow(alpha2, r / p_minus), std::pow(alpha2, r / p_plus));
  const std::size_t n = pre_event_count(result);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = result.records[i];
    const double m1 = rec.grad_modular / alpha2 - (1.0 - slack);
    const double m2 = std::pow(rec.lr, r) / floor_r - (1.0 - slack);
    push(c, rec.t, std::min(m1, m2));
  }
  settle(c);
  return c;
}

CheckResult check_superlinear_growth(const SimResult& result, double C0, double r, double tol) {
  CheckResult c;
  c.name = "superlinear_growth";
  const std::size_t n = pre_event_count(result);
  for (std::size_t i = 1; i < n; ++i) {
    const auto& a = result.records[i - 1];
    const auto& b = result.records[i];
    const double slope = (b.G_half - a.G_half) / (b.t - a.t);
    const double need = C0 * std::pow(a.G_half, r / 2.0) * (1.0 - tol);
    push(c, b.t, (slope - need) / need);
  }
  settle(c);
  return c;
}

CheckResult check_blow_up_time(const SimResult& result, double T_star) {
  CheckResult c;
  c.name = "blow_up_time";
  if (result.event.kind == EventKind::blow_up) {
    push(c, result.event.time, T_star - result.event.time);
    c.note = "observed " + std::to_string(result.event.time) + " bound " + std::to_string(T_star);
  } else if (result.event.kind == EventKind::extinction) {
    c.verdict = Verdict::fail;
    c.note = "solution went extinct";
  } else {
    c.verdict = Verdict::inconclusive;
    c.note = "no blow-up before the horizon";
  }
  settle(c);
  return c;
}

CheckResult check_l2_growth(const SimResult& result, double floor_rate, double slack) {
  CheckResult c;
  c.name = "growth";
  if (result.records.empty()) return c;
  const double g0 = result.records.front().G_half;
  const std::size_t n = pre_event_count(result);
  for (std::size_t i = 1; i < n; ++i) {
    const auto& a = result.records[i - 1];
    const auto& b = result.records[i];
    double m = (b.G_half - a.G_half) / std::max(a.G_half, 1e-300);
    if (floor_rate > 0.0) {
      const double fl = g0 * std::exp(floor_rate * b.t) * (1.0 - slack);
      m = std::min(m, (b.G_half - fl) / fl);
    }
    push(c, b.t, m);
  }
  if (result.event.kind == EventKind::extinction) c.verdict = Verdict::fail;
  settle(c);
  return c;
}

}  // namespace pxlab
