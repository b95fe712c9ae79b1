#include "pxlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pxlab/error.hpp"
#include "pxlab/function_spaces.hpp"

namespace pxlab {
namespace {

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

CheckResult incompatible(const std::string& name, const std::string& why) {
  CheckResult c;
  c.name = name;
  c.verdict = Verdict::incompatible;
  c.note = why;
  return c;
}

ScalarField initial_of(const SimConfig& c) {
  return c.initial_field ? *c.initial_field : make_initial(c.grid, c.initial);
}

json diagnostics_json(const EnergyRecord& r) {
  json j = {{"E", r.E}, {"G_half", r.G_half}, {"G_sq", r.G_sq}, {"grad_modular", r.grad_modular},
            {"lr", r.lr}, {"linf", r.linf}};
  return j;
}

json base_report(const ExperimentConfig& cfg, const std::optional<ConstantsBundle>& b) {
  json j;
  j["config"] = to_json(cfg);
  j["constants"] = b ? to_json(b->constants) : json(nullptr);
  j["regime"] = b ? to_json(b->regime) : json(nullptr);
  j["initial"] = b ? diagnostics_json(b->inputs.initial) : json(nullptr);
  j["grad_norm_p"] = b ? json(b->inputs.grad_norm_p) : json(nullptr);
  j["scheme"] = nullptr;
  j["steps"] = nullptr;
  j["event"] = nullptr;
  j["checks"] = json::array();
  j["sensitivity"] = json::array();
  j["eigen"] = nullptr;
  j["epsilon"] = nullptr;
  j["exit_code"] = 0;
  return j;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {"dissipation", "linf_bound", "l2_envelope", "barrier", "ordering",
                                                 "lemma24", "superlinear", "blow_up_time", "growth"};
  return names;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  c.sim = sim_config_from_json(j, {"compute_constants", "checks", "embedding", "eigen", "seed", "barrier_T"});
  try {
    c.compute_constants = j.value("compute_constants", true);
    c.checks = j.value("checks", std::vector<std::string>{});
    c.seed = j.value("seed", static_cast<std::uint64_t>(kDefaultSeed));
    c.barrier_T = j.value("barrier_T", 0.0);
    if (j.contains("embedding")) {
      c.embedding.restarts = j.at("embedding").value("restarts", c.embedding.restarts);
      c.embedding.iters = j.at("embedding").value("iters", c.embedding.iters);
    }
    if (j.contains("eigen")) {
      c.eigen.tol = j.at("eigen").value("tol", c.eigen.tol);
      c.eigen.max_iters = j.at("eigen").value("max_iters", c.eigen.max_iters);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment options: ") + e.what());
  }
  for (const auto& name : c.checks)
    if (!has(known_checks(), name)) throw ConfigError("unknown check '" + name + "'");
  if (c.embedding.restarts < 1 || c.embedding.iters < 0) throw ConfigError("embedding options out of range");
  if (c.barrier_T < 0.0) throw ConfigError("barrier_T must be non-negative");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j = to_json(c.sim);
  j["compute_constants"] = c.compute_constants;
  j["checks"] = c.checks;
  j["embedding"] = {{"restarts", c.embedding.restarts}, {"iters", c.embedding.iters}};
  j["eigen"] = {{"tol", c.eigen.tol}, {"max_iters", c.eigen.max_iters}};
  j["seed"] = c.seed;
  j["barrier_T"] = c.barrier_T;
  return j;
}

ConstantsBundle evaluate_constants(const ExperimentConfig& cfg) {
  const auto& sim = cfg.sim;
  const auto p = sample(sim.exponent, sim.grid);
  const auto u0 = initial_of(sim);
  ConstantsBundle b;
  auto& in = b.inputs;
  in.dim = sim.grid.dim;
  in.omega = sim.grid.measure();
  in.p_minus = p.p_minus;
  in.p_plus = p.p_plus;
  in.r = sim.r;
  in.initial = diagnostics(u0, p, sim.r, std::numeric_limits<double>::quiet_NaN());
  in.grad_norm_p = gradient_luxemburg_norm(u0, p);
  in.u0_min = *std::min_element(u0.values.begin(), u0.values.end());
  in.u0_linf = in.initial.linf;

  const auto fd = fast_diffusion_constants(in.dim, in.p_minus, in.p_plus);
  if (fd.s > -1.0) {
    double g = 0.0;
    for (double v : u0.values) g += std::pow(std::max(v, 0.0), fd.s + 1.0);
    in.G_fd0 = g * sim.grid.cell_volume();
  }

  const double crit = sobolev_exponent(in.dim, in.p_minus);
  auto estimate = [&](double target) {
    return estimate_embedding_constant(sim.grid, p, target, cfg.embedding.restarts, cfg.embedding.iters, cfg.seed)
        .constant;
  };
  if (sim.r > in.p_plus && sim.r < crit) in.B = estimate(sim.r);
  if (2.0 < crit) in.C2 = (sim.r == 2.0 && in.B) ? *in.B : estimate(2.0);
  if (fd.valid) in.C_fd = estimate(0.99 * crit);

  b.constants = compute_theory(in);
  b.regime = classify_regime(in, b.constants);
  return b;
}

double barrier_epsilon(const EigenPair& pair, const ScalarField& u0, double r, double p_minus) {
  return 0.5 * std::min(epsilon_bound(pair, u0, r, p_minus), epsilon_sufficient_bound(pair, u0, r, p_minus));
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  ExperimentOutcome out;
  if (cfg.compute_constants) out.constants = evaluate_constants(cfg);
  const TheoryConstants* tc = out.constants ? &out.constants->constants : nullptr;
  const Regime regime = out.constants ? out.constants->regime.regime : Regime::unknown;

  SimConfig sim = cfg.sim;
  if (tc && tc->E1_used.defined()) sim.E1 = tc->E1_used.value;
  const bool ordering = has(cfg.checks, "ordering");
  const double T = cfg.barrier_T > 0.0 ? cfg.barrier_T : sim.t_max;
  if (ordering) {
    if (sim.output_interval == 0.0) sim.output_interval = sim.t_max / 20.0;
    sim.keep_snapshots = true;
  }
  out.result = run(sim);
  const auto& res = out.result;

  const auto p = sample(sim.exponent, sim.grid);
  const auto u0 = initial_of(sim);
  const double u0_min = *std::min_element(u0.values.begin(), u0.values.end());
  const bool barrier_ok = sim.r < p.p_minus && u0_min > 0.0;
  std::optional<double> eps;
  json eps_json = nullptr;
  if ((has(cfg.checks, "barrier") || ordering) && barrier_ok) {
    out.eigen = first_eigenpair(sim.grid, sim.exponent, cfg.eigen.tol, cfg.eigen.max_iters, sim.eps_reg);
    eps = barrier_epsilon(*out.eigen, u0, sim.r, p.p_minus);
    eps_json = {{"printed_bound", epsilon_bound(*out.eigen, u0, sim.r, p.p_minus)},
                {"sufficient_bound", epsilon_sufficient_bound(*out.eigen, u0, sim.r, p.p_minus)},
                {"used", *eps},
                {"T", T}};
  }
  const std::string no_constants = "constants were not computed";

  for (const auto& name : cfg.checks) {
    if (name == "dissipation") {
      out.checks.push_back(check_energy_monotone(res));
    } else if (name == "linf_bound") {
      out.checks.push_back(sim.r < 2.0 ? check_linf_bound(res, sim.r) : incompatible(name, "needs r < 2"));
    } else if (name == "l2_envelope") {
      if (!tc || !tc->extinction) {
        out.checks.push_back(incompatible(name, tc ? "needs the H9 window and an L2 embedding estimate" : no_constants));
        continue;
      }
      const auto& e = *tc->extinction;
      out.checks.push_back(check_l2_envelope(res, e));
      for (double f : {0.5, 2.0}) {
        const auto scaled = extinction_constants(e.u0_l2, e.C1 * f, e.p_minus, e.p_plus, e.r, sim.grid.measure(),
                                                 sim.grid.dim);
        auto c = check_l2_envelope(res, scaled);
        c.name = f < 1.0 ? "l2_envelope_C1_half" : "l2_envelope_C1_double";
        out.sensitivity.push_back(c);
      }
    } else if (name == "lemma24") {
      if (tc && regime == Regime::blow_up && tc->alpha2.defined())
        out.checks.push_back(check_lemma24(res, tc->alpha2.value, tc->B1.value, p.p_minus, p.p_plus, sim.r));
      else
        out.checks.push_back(incompatible(name, tc ? "needs the blow-up regime" : no_constants));
    } else if (name == "superlinear") {
      if (tc && regime == Regime::blow_up && tc->C0.defined())
        out.checks.push_back(check_superlinear_growth(res, tc->C0.value, sim.r));
      else
        out.checks.push_back(incompatible(name, tc ? "needs the blow-up regime" : no_constants));
    } else if (name == "blow_up_time") {
      if (tc && tc->T_star.defined())
        out.checks.push_back(check_blow_up_time(res, tc->T_star.value));
      else
        out.checks.push_back(incompatible(name, tc ? "T_star is unavailable: " + tc->T_star.note : no_constants));
    } else if (name == "growth") {
      if (tc && (regime == Regime::global_L2_growth || regime == Regime::global_Linf_growth)) {
        const double rate = regime == Regime::global_L2_growth ? tc->C0.value : 0.0;
        out.checks.push_back(check_l2_growth(res, rate));
      } else {
        out.checks.push_back(incompatible(name, tc ? "needs a global growth regime" : no_constants));
      }
    } else if (name == "barrier") {
      if (!eps) {
        out.checks.push_back(incompatible(name, "needs r < p- and min u0 > 0"));
        continue;
      }
      const auto b = check_barrier_inequality(*out.eigen, *eps, p, sim.r, T);
      CheckResult c;
      c.name = name;
      c.times = {b.worst_time};
      c.margins = {-b.worst_margin};
      c.worst_margin = -b.worst_margin;
      c.verdict = b.holds ? Verdict::pass : Verdict::fail;
      if (!out.eigen->converged) {
        c.verdict = Verdict::inconclusive;
        c.note = "eigen solve did not converge";
      }
      out.checks.push_back(c);
    } else if (name == "ordering") {
      if (!eps) {
        out.checks.push_back(incompatible(name, "needs r < p- and min u0 > 0"));
        continue;
      }
      SimConfig aux = sim;
      aux.source.kind = SourceKind::barrier_auxiliary;
      aux.source.epsilon = *eps;
      aux.source.lambda1 = out.eigen->lambda1;
      aux.source.phi = out.eigen->phi.values;
      const auto v = run(aux);
      out.checks.push_back(check_ordering(res, v, *out.eigen, *eps, T));
    }
  }

  out.exit_code = std::all_of(out.checks.begin(), out.checks.end(), [](const CheckResult& c) { return c.passed(); })
                      ? 0
                      : 2;

  json j = base_report(cfg, out.constants);
  j["scheme"] = to_string(res.scheme);
  j["steps"] = res.steps;
  j["event"] = to_json(res.event);
  for (const auto& c : out.checks) j["checks"].push_back(to_json(c));
  for (const auto& c : out.sensitivity) j["sensitivity"].push_back(to_json(c));
  if (out.eigen) j["eigen"] = eigen_summary(*out.eigen);
  j["epsilon"] = eps_json;
  j["exit_code"] = out.exit_code;
  out.report = std::move(j);
  return out;
}

json constants_report(const ExperimentConfig& cfg, const ConstantsBundle& b) { return base_report(cfg, b); }

void write_experiment(const ExperimentOutcome& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", out.report.dump(2) + "\n");
  std::ostringstream series;
  write_series_csv(series, out.result.records);
  write_text(dir / "series.csv", series.str());
  std::ostringstream field;
  write_field_csv(field, out.result.final_field);
  write_text(dir / "final_field.csv", field.str());
  if (out.eigen) {
    std::ostringstream phi;
    write_field_csv(phi, out.eigen->phi, "phi");
    write_text(dir / "phi.csv", phi.str());
  }
}

}  // namespace pxlab
