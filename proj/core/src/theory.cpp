#include "pxlab/theory.hpp"

#include <algorithm>
#include <cmath>

#include "pxlab/error.hpp"

namespace pxlab {
namespace {

double branch_max(double alpha, double p_minus, double p_plus, double r) {
  return std::max(std::pow(alpha, r / p_minus), std::pow(alpha, r / p_plus));
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::estimated: return "estimated";
    case Provenance::formula: return "formula";
    case Provenance::root_found: return "root-found";
    case Provenance::derived: return "derived";
    default: return "unavailable";
  }
}

double h_of_alpha(double alpha, double p_minus, double p_plus, double r, double B1) {
  if (!(alpha >= 0.0)) throw InvalidArgument("h(alpha) needs alpha >= 0");
  return alpha / p_plus - std::pow(B1, r) / r * branch_max(alpha, p_minus, p_plus, r);
}

CriticalConstants critical_constants(double B, double p_minus, double p_plus, double r) {
  if (!(r > p_plus)) throw InvalidArgument("critical constants need r > p+");
  if (!(B > 0.0) || !std::isfinite(B)) throw InvalidArgument("embedding constant must be positive");
  (void)p_minus;
  CriticalConstants c;
  c.B1 = std::max(B, 1.0);
  c.alpha1 = std::pow(c.B1, r * p_plus / (p_plus - r));
  const double lead = (r - p_plus) / (r * p_plus);
  c.E1_printed = lead * std::pow(c.B1, lead);
  c.E1_peak = lead * c.alpha1;
  return c;
}

double solve_alpha2(double E0, const CriticalConstants& c, double p_minus, double p_plus, double r, double tol) {
  if (!(E0 < c.E1_peak)) throw InvalidArgument("alpha2 needs E(0) < E1");
  auto h = [&](double a) { return h_of_alpha(a, p_minus, p_plus, r, c.B1); };
  double lo = c.alpha1;
  double hi = 2.0 * c.alpha1;
  for (int i = 0; h(hi) >= E0; ++i) {
    if (i > 2000 || !std::isfinite(hi)) throw NumericalError("alpha2: no bracket");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (h(mid) >= E0) lo = mid;
    else hi = mid;
  }
  const double best = std::abs(h(lo) - E0) <= std::abs(h(hi) - E0) ? lo : hi;
  if (!(std::abs(h(best) - E0) <= std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(E0))))
    throw NumericalError("alpha2: residual above tolerance");
  return best;
}

BlowUpConstants blow_up_constants(double alpha2, const CriticalConstants& c, double E1_used, double p_minus,
                                  double p_plus, double r, double omega_measure) {
  if (!(r >= 2.0) || !(r > p_plus)) throw InvalidArgument("C0 needs r >= 2 and r > p+");
  if (!(alpha2 > 0.0) || !(omega_measure > 0.0)) throw InvalidArgument("C0 needs alpha2 > 0 and |Omega| > 0");
  BlowUpConstants b;
  b.M = branch_max(alpha2, p_minus, p_plus, r);
  const double scale = std::pow(omega_measure, (2.0 - r) / 2.0) * std::pow(2.0, r / 2.0);
  const double Br = std::pow(c.B1, r);
  auto general = [&](double E1) { return ((r - p_plus) / r - p_plus * E1 / (Br * b.M)) * scale; };
  b.C0 = general(E1_used);
  b.C0_general_printed = general(c.E1_printed);
  b.C0_display = (r - p_plus) * (Br * b.M - std::pow(c.B1, (r - p_plus) / (r * p_plus))) / (Br * b.M * r) * scale;
  b.positive = b.C0 > 0.0;
  return b;
}

double blow_up_time_bound(double G0_half, double C0, double r) {
  if (!(r > 2.0)) throw InvalidArgument("blow-up time bound needs r > 2");
  if (!(C0 > 0.0) || !(G0_half > 0.0)) throw InvalidArgument("blow-up time bound needs C0 > 0 and G(0) > 0");
  return std::pow(G0_half, 1.0 - r / 2.0) / ((r / 2.0 - 1.0) * C0);
}

double ExtinctionConstants::g(double t) const {
  if (r == 2.0) return y0 - K1 + K1 * std::exp((p_minus - 2.0) * t);
  return y0 + F_u0 * t;
}

double ExtinctionConstants::envelope(double t) const {
  return std::pow(std::max(g(t), 0.0), 1.0 / (2.0 - p_plus));
}

ExtinctionConstants extinction_constants(double u0_l2, double C1, double p_minus, double p_plus, double r,
                                         double omega_measure, int dim) {
  const double lower = 2.0 * dim / (dim + 2.0);
  if (!(lower < p_minus && p_minus <= p_plus && p_plus < r && r <= 2.0))
    throw InvalidArgument("extinction constants need 2N/(N+2) < p- <= p+ < r <= 2");
  if (!(u0_l2 > 0.0)) throw InvalidArgument("extinction constants need ||u0||_2 > 0");
  if (!(C1 > 0.0)) throw InvalidArgument("extinction constants need C1 > 0");
  ExtinctionConstants e;
  e.p_minus = p_minus;
  e.p_plus = p_plus;
  e.r = r;
  e.u0_l2 = u0_l2;
  e.C1 = C1;
  e.y0 = std::pow(u0_l2, 2.0 - p_plus);
  const double m = std::min(1.0, std::pow(u0_l2, p_minus - p_plus));
  if (r == 2.0) {
    e.K1 = (2.0 - p_plus) / (2.0 - p_minus) * C1 * m;
    e.small_data = e.K1 > e.y0;
    if (e.small_data) e.T1 = std::log(1.0 - e.y0 / e.K1) / (p_minus - 2.0);
  } else {
    e.F_u0 = (2.0 - p_plus) *
             (2.0 * std::pow(omega_measure, (2.0 - r) / 2.0) * std::pow(u0_l2, r - p_plus) - 0.5 * C1 * m);
    e.small_data = e.F_u0 < 0.0;
    if (e.small_data) e.T1 = e.y0 / (-e.F_u0);
  }
  return e;
}

double derive_C1(double C2, double p_minus, double p_plus) {
  if (!(C2 > 0.0)) throw InvalidArgument("C1 needs C2 > 0");
  return 0.5 * std::min(std::pow(C2, -p_plus), std::pow(C2, -p_minus));
}

OdeTrajectory comparison_ode(double y0, double A, double Bc, double p_plus, double r, double dt, double horizon) {
  if (!(p_plus < 2.0)) throw InvalidArgument("comparison ODE needs p+ < 2");
  if (!(y0 > 0.0)) throw InvalidArgument("comparison ODE needs y0 > 0");
  if (!(dt > 0.0) || !(horizon > 0.0)) throw InvalidArgument("comparison ODE needs dt > 0 and horizon > 0");
  const double k = (2.0 - p_plus) / 2.0;
  const double e = (r - p_plus) / (2.0 - p_plus);
  auto f = [&](double y) { return k * (Bc * std::pow(std::max(y, 0.0), e) - A); };
  OdeTrajectory out;
  double t = 0.0;
  double y = y0;
  out.t.push_back(t);
  out.y.push_back(y);
  while (t < horizon) {
    const double h = std::min(dt, horizon - t);
    const double k1 = f(y);
    const double k2 = f(y + 0.5 * h * k1);
    const double k3 = f(y + 0.5 * h * k2);
    const double k4 = f(y + h * k3);
    const double next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (next <= 0.0) {
      out.hitting_time = t + h * y / (y - next);
      out.t.push_back(out.hitting_time);
      out.y.push_back(0.0);
      break;
    }
    t += h;
    y = next;
    out.t.push_back(t);
    out.y.push_back(y);
  }
  return out;
}

FastDiffusion fast_diffusion_constants(int dim, double p_minus, double p_plus) {
  FastDiffusion fd;
  const double N = dim;
  fd.s = (2.0 * N - (N + 1.0) * p_minus) / p_minus;
  fd.beta = (2.0 - p_minus) * (N - p_minus) / (p_minus * p_minus);
  fd.kappa = (N * p_minus - p_plus * (N - p_minus)) / (2.0 * N * p_minus);
  const bool lower = 1.0 < p_minus && p_minus < 2.0 * N / (N + 2.0);
  const bool upper = 1.0 < p_plus && (p_minus >= N || p_plus < N * p_minus / (N - p_minus));
  fd.valid = lower && upper;
  fd.s_positive = fd.s > 0.0;
  return fd;
}

double fast_diffusion_T3(const FastDiffusion& fd, int dim, double p_minus, double p_plus, double C2, double C3,
                         double G0) {
  if (!(C2 > 0.0) || !(C3 > 0.0) || !(G0 >= 0.0)) throw InvalidArgument("T3 needs C2, C3 > 0 and G(0) >= 0");
  const double N = dim;
  const double q = C2 / C3;
  const double gk = std::pow(G0, fd.kappa);
  if (!(q > gk)) return std::numeric_limits<double>::infinity();
  const double denom = C3 * (2.0 - p_minus) * (N * p_minus - p_plus * (N - p_minus));
  return p_minus * p_minus / denom * std::log(1.0 + gk / (q - gk));
}

TheoryConstants compute_theory(const TheoryInputs& in) {
  TheoryConstants c;
  const double pm = in.p_minus, pp = in.p_plus, r = in.r;
  const double E0 = in.initial.E;
  c.B = in.B ? Quantity::make(*in.B, Provenance::estimated) : Quantity::missing("no L^r embedding estimate");
  c.C2 = in.C2 ? Quantity::make(*in.C2, Provenance::estimated) : Quantity::missing("no L^2 embedding estimate");
  for (Quantity* q : {&c.B1, &c.alpha1, &c.E1_printed, &c.E1_peak, &c.E1_used, &c.alpha2, &c.C0,
                      &c.C0_general_printed, &c.C0_display, &c.T_star})
    *q = Quantity::missing(r > pp ? "no L^r embedding estimate" : "needs r > p+");

  if (r > pp && in.B) {
    const auto crit = critical_constants(*in.B, pm, pp, r);
    c.critical = crit;
    c.B1 = Quantity::make(crit.B1, Provenance::derived);
    c.alpha1 = Quantity::make(crit.alpha1, Provenance::formula);
    c.E1_printed = Quantity::make(crit.E1_printed, Provenance::formula);
    c.E1_peak = Quantity::make(crit.E1_peak, Provenance::formula);
    c.E1_used = c.E1_peak;
    if (E0 < crit.E1_peak) {
      const double a2 = solve_alpha2(E0, crit, pm, pp, r);
      c.alpha2 = Quantity::make(a2, Provenance::root_found);
      if (r >= 2.0) {
        const auto bu = blow_up_constants(a2, crit, crit.E1_peak, pm, pp, r, in.omega);
        c.C0 = bu.positive ? Quantity::make(bu.C0, Provenance::formula) : Quantity::missing("C0 <= 0");
        c.C0_general_printed = Quantity::make(bu.C0_general_printed, Provenance::formula);
        c.C0_display = Quantity::make(bu.C0_display, Provenance::formula);
        if (r > 2.0 && bu.positive && in.initial.G_half > 0.0)
          c.T_star = Quantity::make(blow_up_time_bound(in.initial.G_half, bu.C0, r), Provenance::formula);
        else
          c.T_star = Quantity::missing(r > 2.0 ? "needs C0 > 0 and G(0) > 0" : "needs r > 2");
      } else {
        c.C0 = c.C0_general_printed = c.C0_display = c.T_star = Quantity::missing("needs r >= 2");
      }
    } else {
      c.alpha2 = c.C0 = c.C0_general_printed = c.C0_display = c.T_star = Quantity::missing("E(0) >= E1");
    }
  }

  c.C1 = in.C2 ? Quantity::make(derive_C1(*in.C2, pm, pp), Provenance::derived)
               : Quantity::missing("no L^2 embedding estimate");
  c.K1 = c.F_u0 = c.T1 = Quantity::missing("outside the small-data extinction window");
  const double lower = 2.0 * in.dim / (in.dim + 2.0);
  const bool h9 = lower < pm && pm <= pp && pp < r && r <= 2.0;
  if (h9 && c.C1.defined() && in.initial.G_sq > 0.0) {
    const auto e = extinction_constants(std::sqrt(in.initial.G_sq), c.C1.value, pm, pp, r, in.omega, in.dim);
    c.extinction = e;
    if (r == 2.0) c.K1 = Quantity::make(e.K1, Provenance::formula);
    else c.F_u0 = Quantity::make(e.F_u0, Provenance::formula);
    c.T1 = Quantity::make(e.T1, Provenance::formula);
    if (!e.small_data) c.T1.note = "data not small enough";
  } else if (h9) {
    c.K1 = c.F_u0 = c.T1 = Quantity::missing(c.C1.defined() ? "zero initial data" : "no L^2 embedding estimate");
  }

  const auto fd = fast_diffusion_constants(in.dim, pm, pp);
  c.s = Quantity::make(fd.s, Provenance::formula);
  c.beta = Quantity::make(fd.beta, Provenance::formula);
  c.kappa = Quantity::make(fd.kappa, Provenance::formula);
  c.C2_fd = c.C3_fd = c.T3 = Quantity::missing(fd.valid ? "no critical embedding estimate" : "outside the fast-diffusion window");
  if (fd.valid && in.C_fd) {
    const double ce = *in.C_fd;
    const double c2 = fd.s / std::pow(fd.beta, pp) * std::min(std::pow(ce, -pp), std::pow(ce, -pm));
    const double c3 = r == 2.0 ? 1.0 : std::pow(in.u0_linf, r - 2.0);
    c.C2_fd = Quantity::make(c2, Provenance::derived);
    c.C3_fd = Quantity::make(c3, Provenance::derived);
    if (c3 > 0.0) {
      c.T3 = Quantity::make(fast_diffusion_T3(fd, in.dim, pm, pp, c2, c3, in.G_fd0), Provenance::formula);
      if (std::isinf(c.T3.value)) c.T3.note = "data not small enough";
    } else {
      c.T3 = Quantity::missing("zero initial data");
    }
  }
  return c;
}

}  // namespace pxlab
