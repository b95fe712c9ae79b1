#include <cmath>
#include <sstream>

#include "pxlab/error.hpp"
#include "pxlab/theory.hpp"

namespace pxlab {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::blow_up: return "blow_up";
    case Regime::global_L2_growth: return "global_L2_growth";
    case Regime::global_Linf_growth: return "global_Linf_growth";
    case Regime::extinction_small_data: return "extinction_small_data";
    case Regime::non_extinction: return "non_extinction";
    case Regime::fast_diffusion_extinction: return "fast_diffusion_extinction";
    default: return "unknown";
  }
}

const Hypothesis& RegimeReport::at(const std::string& name) const {
  for (const auto& h : hypotheses)
    if (h.name == name) return h;
  throw InvalidArgument("no hypothesis named " + name);
}

RegimeReport classify_regime(const TheoryInputs& in, const TheoryConstants& c) {
  const double N = in.dim;
  const double pm = in.p_minus, pp = in.p_plus, r = in.r;
  const double E0 = in.initial.E;
  const double lower = 2.0 * N / (N + 2.0);
  RegimeReport rep;
  std::ostringstream why;

  // Initial-data condition shared by H1 and H5.
  Hypothesis data{"H1", false, {}};
  if (c.E1_used.defined() && c.alpha1.defined()) {
    const double g = in.grad_norm_p;
    const double gm = std::min(std::pow(g, pm), std::pow(g, pp));
    data.holds = E0 < c.E1_used.value && gm > c.alpha1.value;
    data.witness = "E(0)=" + fmt(E0) + " E1=" + fmt(c.E1_used.value) + " min|grad u0|^p=" + fmt(gm) +
                   " alpha1=" + fmt(c.alpha1.value);
  } else {
    data.witness = "E1/alpha1 unavailable: " + c.E1_used.note;
  }

  Hypothesis h2{"H2", false, {}};
  const double r_cap = (2.0 * N + (N + 2.0) * (pm - 1.0)) / N;
  h2.holds = std::max(1.0, lower) < pm && pm < N && std::max(2.0, pp) < r && r <= r_cap;
  h2.witness = "p-=" + fmt(pm) + " p+=" + fmt(pp) + " r=" + fmt(r) + " r_cap=" + fmt(r_cap);

  Hypothesis h5 = data;
  h5.name = "H5";
  Hypothesis h6{"H6", lower < pm && pm <= pp && pp < r && r == 2.0, "window 2N/(N+2) < p- <= p+ < r = 2"};

  Hypothesis h7{"H7", E0 <= 0.0, "E(0)=" + fmt(E0)};
  Hypothesis h8{"H8", lower < pm && pm <= pp && pp < r && r < 2.0, "window 2N/(N+2) < p- <= p+ < r < 2"};

  Hypothesis h9{"H9", lower < pm && pm <= pp && pp < r && r <= 2.0, "window 2N/(N+2) < p- <= p+ < r <= 2"};
  bool small = false;
  if (h9.holds) {
    if (c.extinction) {
      const auto& e = *c.extinction;
      small = e.small_data;
      h9.witness += r == 2.0 ? "; K1=" + fmt(e.K1) + " vs ||u0||^(2-p+)=" + fmt(e.y0)
                             : "; F(u0)=" + fmt(e.F_u0);
    } else {
      h9.witness += "; small-data test unavailable: " + c.T1.note;
    }
  }

  Hypothesis h10{"H10", lower < r && r < pm && pm <= pp && pp <= 2.0, "window 2N/(N+2) < r < p- <= p+ <= 2"};
  const bool positive = in.u0_min > 0.0;
  if (h10.holds) h10.witness += "; min u0=" + fmt(in.u0_min);

  const auto fd = fast_diffusion_constants(in.dim, pm, pp);
  Hypothesis h11{"H11", fd.valid && r >= 2.0, "window 1 < p- < 2N/(N+2), p+ < N p-/(N - p-), r >= 2"};
  const bool fd_small = h11.holds && c.T3.defined() && std::isfinite(c.T3.value);
  if (h11.holds) h11.witness += c.T3.defined() ? "; T3=" + fmt(c.T3.value) : "; T3 unavailable: " + c.T3.note;

  rep.hypotheses = {data, h2, h5, h6, h7, h8, h9, h10, h11};

  const bool blow = data.holds && h2.holds && c.C0.defined();
  const bool l2_growth = h5.holds && h6.holds && c.C0.defined();
  const bool linf_growth = h7.holds && h8.holds;
  const bool small_ext = h9.holds && small;
  const bool non_ext = h10.holds && positive;
  const bool fast = fd_small;
  if (blow) rep.satisfied_blocks.push_back("H1-H2");
  if (l2_growth) rep.satisfied_blocks.push_back("H5-H6");
  if (linf_growth) rep.satisfied_blocks.push_back("H7-H8");
  if (small_ext) rep.satisfied_blocks.push_back("H9");
  if (non_ext) rep.satisfied_blocks.push_back("H10");
  if (fast) rep.satisfied_blocks.push_back("H11");

  if (blow) rep.regime = Regime::blow_up;
  else if (fast) rep.regime = Regime::fast_diffusion_extinction;
  else if (small_ext) rep.regime = Regime::extinction_small_data;
  else if (non_ext) rep.regime = Regime::non_extinction;
  else if (linf_growth) rep.regime = Regime::global_Linf_growth;
  else if (l2_growth) rep.regime = Regime::global_L2_growth;

  if (rep.regime == Regime::unknown) {
    why << "no hypothesis block satisfied";
    if (h9.holds && !small) why << "; H9 window holds but the data is not small enough";
    if (h10.holds && !positive) why << "; H10 window holds but u0 is not positive";
    if (h11.holds && !fd_small) why << "; H11 window holds but the small-data test failed or is unavailable";
    if (lower < pm && pm < r && r < pp && pp < 2.0) why << "; parameters in the open window p- < r < p+ < 2";
    rep.explanation = why.str();
  } else {
    rep.explanation = "satisfied blocks:";
    for (const auto& b : rep.satisfied_blocks) rep.explanation += " " + b;
  }
  return rep;
}

}  // namespace pxlab
