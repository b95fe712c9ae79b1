#include "cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pxlab/error.hpp"
#include "pxlab/experiment.hpp"

namespace pxlab {
namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> stride;
};

void add_common(CLI::App* cmd, Options& o, bool with_stride) {
  cmd->add_option("config", o.config, "JSON configuration file")->required();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", o.seed, "seed for the randomized estimators");
  if (with_stride) cmd->add_option("--stride", o.stride, "record every K steps")->check(CLI::PositiveNumber);
}

// The eigen verb needs no source exponent, so `r` may be omitted there.
ExperimentConfig load(const Options& o, bool r_optional = false) {
  json j = parse_json_file(o.config);
  if (r_optional && j.is_object() && !j.contains("r")) j["r"] = 2.0;
  auto cfg = experiment_config_from_json(j);
  if (o.seed) cfg.seed = *o.seed;
  if (o.stride) cfg.sim.stride = *o.stride;
  return cfg;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

int do_run(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  const auto res = run_experiment(cfg);
  write_experiment(res, o.out);
  out << "regime: " << (res.constants ? to_string(res.constants->regime.regime) : "not computed") << '\n';
  out << "scheme: " << to_string(res.result.scheme) << ", steps: " << res.result.steps << '\n';
  out << "event: " << to_string(res.result.event.kind);
  if (res.result.event.kind != EventKind::none) out << " at t=" << fmt(res.result.event.time);
  out << '\n';
  for (const auto& c : res.checks) out << "check " << c.name << ": " << to_string(c.verdict) << (c.note.empty() ? "" : " (" + c.note + ")") << '\n';
  out << "artifacts: " << o.out << '\n';
  return res.exit_code;
}

int do_constants(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  const auto b = evaluate_constants(cfg);
  std::filesystem::create_directories(o.out);
  write_text(std::filesystem::path(o.out) / "report.json", constants_report(cfg, b).dump(2) + "\n");
  out << "regime: " << to_string(b.regime.regime) << " (" << b.regime.explanation << ")\n";
  const auto& c = b.constants;
  for (const auto& [name, q] : std::initializer_list<std::pair<const char*, const Quantity*>>{
           {"B", &c.B}, {"E1", &c.E1_used}, {"alpha1", &c.alpha1}, {"alpha2", &c.alpha2}, {"C0", &c.C0},
           {"T_star", &c.T_star}, {"C1", &c.C1}, {"T1", &c.T1}, {"T3", &c.T3}}) {
    if (q->defined()) out << name << " = " << fmt(q->value) << " [" << to_string(q->provenance) << "]\n";
  }
  out << "artifacts: " << o.out << '\n';
  return 0;
}

int do_eigen(const Options& o, std::ostream& out) {
  const auto cfg = load(o, true);
  const auto pair = first_eigenpair(cfg.sim.grid, cfg.sim.exponent, cfg.eigen.tol, cfg.eigen.max_iters, cfg.sim.eps_reg);
  std::filesystem::create_directories(o.out);
  write_text(std::filesystem::path(o.out) / "eigen.json", eigen_summary(pair).dump(2) + "\n");
  std::ostringstream phi;
  write_field_csv(phi, pair.phi, "phi");
  write_text(std::filesystem::path(o.out) / "phi.csv", phi.str());
  out << "lambda1 = " << fmt(pair.lambda1) << ", M = " << fmt(pair.M) << ", residual = " << pair.residual
      << (pair.converged ? "" : " (not converged)") << '\n';
  return pair.converged ? 0 : 2;
}

int do_sweep(const Options& o, std::ostream& out) {
  auto spec = sweep_spec_from_json(parse_json_file(o.config));
  if (o.seed) spec.base.seed = *o.seed;
  if (o.stride) spec.base.sim.stride = *o.stride;
  const auto rows = run_sweep(spec);
  std::filesystem::create_directories(o.out);
  std::ostringstream csv;
  write_phase_csv(csv, rows);
  write_text(std::filesystem::path(o.out) / "phase.csv", csv.str());
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.agreement == "error";
  out << rows.size() << " cells, " << failed << " failed; artifacts: " << o.out << '\n';
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pxlab: p(x)-Laplacian reaction-diffusion experiments"};
  app.require_subcommand(1);
  Options run_o, sweep_o, const_o, eigen_o;
  auto* run = app.add_subcommand("run", "simulate, classify and check one configuration");
  add_common(run, run_o, true);
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid and write phase.csv");
  add_common(sweep, sweep_o, true);
  auto* constants = app.add_subcommand("constants", "constants and regime classification only");
  add_common(constants, const_o, false);
  auto* eigen = app.add_subcommand("eigen", "first eigenpair of the p(x)-Laplacian");
  add_common(eigen, eigen_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return do_run(run_o, out);
    if (*sweep) return do_sweep(sweep_o, out);
    if (*constants) return do_constants(const_o, out);
    return do_eigen(eigen_o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pxlab
