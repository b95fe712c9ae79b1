#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include "pxlab/error.hpp"
#include "pxlab/experiment.hpp"

namespace pxlab {
namespace {

std::vector<double> axis(const json& axes, const char* key, double fallback) {
  if (!axes.contains(key)) return {fallback};
  std::vector<double> v;
  try {
    v = axes.at(key).get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("sweep axis '") + key + "' must be an array of numbers");
  }
  if (v.empty()) throw ConfigError(std::string("sweep axis '") + key + "' is empty");
  for (double x : v)
    if (!std::isfinite(x)) throw ConfigError(std::string("sweep axis '") + key + "' has a non-finite value");
  return v;
}

bool agrees(Regime predicted, const SimResult& res) {
  switch (predicted) {
    case Regime::blow_up: return res.event.kind == EventKind::blow_up;
    case Regime::extinction_small_data:
    case Regime::fast_diffusion_extinction: return res.event.kind == EventKind::extinction;
    case Regime::non_extinction: return res.event.kind != EventKind::extinction;
    case Regime::global_L2_growth:
    case Regime::global_Linf_growth:
      return res.event.kind == EventKind::none && check_l2_growth(res).passed();
    default: return false;
  }
}

}  // namespace

SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("sweep spec must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "base" && k != "axes" && k != "max_runs" && k != "workers")
      throw ConfigError("unknown key '" + k + "' in sweep spec");
  }
  if (!j.contains("base") || !j.contains("axes")) throw ConfigError("sweep spec needs 'base' and 'axes'");
  json base = j.at("base");
  if (!base.is_object()) throw ConfigError("sweep base must be a JSON object");
  if (!base.contains("exponent")) base["exponent"] = {{"kind", "constant"}, {"value", 2.0}};
  if (!base.contains("r")) base["r"] = 2.0;
  SweepSpec s;
  s.base = experiment_config_from_json(base);
  const auto& axes = j.at("axes");
  if (!axes.is_object()) throw ConfigError("sweep axes must be a JSON object");
  for (const auto& [k, v] : axes.items()) {
    (void)v;
    if (k != "p_minus" && k != "p_offset" && k != "r" && k != "amplitude")
      throw ConfigError("unknown sweep axis '" + k + "'");
  }
  s.p_minus = axis(axes, "p_minus", sample(s.base.sim.exponent, s.base.sim.grid).p_minus);
  s.p_offset = axis(axes, "p_offset", 0.0);
  s.r = axis(axes, "r", s.base.sim.r);
  s.amplitude = axis(axes, "amplitude", s.base.sim.initial.amplitude);
  s.max_runs = j.value("max_runs", s.max_runs);
  s.workers = j.value("workers", 0);
  const std::size_t total = s.p_minus.size() * s.p_offset.size() * s.r.size() * s.amplitude.size();
  if (total > s.max_runs) throw ConfigError("sweep has " + std::to_string(total) + " cells, above max_runs");
  return s;
}

std::vector<PhaseRow> run_sweep(const SweepSpec& spec) {
  const std::size_t total = spec.p_minus.size() * spec.p_offset.size() * spec.r.size() * spec.amplitude.size();
  if (total > spec.max_runs) throw ConfigError("sweep has " + std::to_string(total) + " cells, above max_runs");
  std::vector<PhaseRow> rows;
  for (double pm : spec.p_minus)
    for (double off : spec.p_offset)
      for (double r : spec.r)
        for (double a : spec.amplitude) {
          PhaseRow row;
          row.p_minus = pm;
          row.p_plus = pm + off;
          row.r = r;
          row.amplitude = a;
          rows.push_back(row);
        }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      auto& row = rows[i];
      try {
        ExperimentConfig cfg = spec.base;
        const double off = row.p_plus - row.p_minus;
        cfg.sim.exponent = off > 0.0 ? ExponentField::sinusoidal(row.p_minus, off) : ExponentField::constant(row.p_minus);
        cfg.sim.r = row.r;
        cfg.sim.initial.amplitude = row.amplitude;
        cfg.compute_constants = true;
        cfg.checks.clear();
        const auto out = run_experiment(cfg);
        const Regime predicted = out.constants->regime.regime;
        row.predicted_regime = to_string(predicted);
        row.observed_event = to_string(out.result.event.kind);
        row.agreement = predicted == Regime::unknown ? "n/a" : (agrees(predicted, out.result) ? "yes" : "no");
      } catch (const std::exception& e) {
        if (row.predicted_regime.empty()) row.predicted_regime = "error";
        row.observed_event = "error";
        row.agreement = "error";
        row.error = e.what();
      }
    }
  };
  std::size_t n = spec.workers > 0 ? static_cast<std::size_t>(spec.workers) : std::thread::hardware_concurrency();
  n = std::clamp<std::size_t>(n, 1, std::max<std::size_t>(rows.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_phase_csv(std::ostream& os, const std::vector<PhaseRow>& rows) {
  os << kPhaseHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.p_minus) << ',' << format_double(r.p_plus) << ',' << format_double(r.r) << ','
       << format_double(r.amplitude) << ',' << r.predicted_regime << ',' << r.observed_event << ',' << r.agreement
       << '\n';
  }
}

}  // namespace pxlab
