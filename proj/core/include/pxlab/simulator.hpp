#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pxlab/exponent.hpp"
#include "pxlab/grid.hpp"
#include "pxlab/operators.hpp"

namespace pxlab {

enum class SourceKind { standard, none, barrier_auxiliary };

/// Reaction term. `barrier_auxiliary` is lambda1 v^r / (eps Phi + lambda1 v).
struct SourceSpec {
  SourceKind kind = SourceKind::standard;
  double epsilon = 0.0;
  double lambda1 = 0.0;
  std::vector<double> phi;
};

enum class Scheme { automatic, explicit_euler, semi_implicit };

struct InitialSpec {
  std::string profile = "sine";  // zero | constant | sine | parabola | sextic
  double amplitude = 1.0;
};

ScalarField make_initial(const Grid& grid, const InitialSpec& spec);

struct SimConfig {
  Grid grid;
  ExponentField exponent = ExponentField::constant(2.0);
  double r = 2.0;
  InitialSpec initial;
  std::optional<ScalarField> initial_field;  // overrides `initial` when set
  double t_max = 0.1;
  double dt_safety = 0.5;
  double dt_max = 0.0;  // 0 selects t_max / 100
  double eps_reg = kDefaultEpsReg;
  double blow_up_threshold = 1e8;
  double extinction_threshold = 1e-10;
  SourceSpec source;
  Scheme scheme = Scheme::automatic;
  int stride = 1;
  double output_interval = 0.0;  // > 0: land on and record at multiples of it
  bool keep_snapshots = false;
  double change_limit = 0.05;  // semi-implicit: max relative sup-norm change per step
  double E1 = std::numeric_limits<double>::quiet_NaN();
  std::size_t max_steps = 20'000'000;

  void validate() const;
};

struct EnergyRecord {
  double t = 0.0;
  double E = 0.0;
  double G_half = 0.0;
  double G_sq = 0.0;
  double H = std::numeric_limits<double>::quiet_NaN();
  double ut_l2sq = 0.0;
  double grad_modular = 0.0;
  double lr = 0.0;
  double linf = 0.0;
  double dissipated = 0.0;  // running sum of dt ||u_t||_2^2
  double dt = 0.0;          // last step before this record
};

enum class EventKind { none, blow_up, extinction };
std::string to_string(EventKind k);
std::string to_string(Scheme s);

struct Event {
  EventKind kind = EventKind::none;
  double time = 0.0;
  double dt_error = 0.0;
};

struct SimResult {
  std::vector<EnergyRecord> records;
  std::vector<ScalarField> snapshots;
  Event event;
  ScalarField initial_field;
  ScalarField final_field;
  std::vector<double> dt_history;
  Scheme scheme = Scheme::explicit_euler;
  std::size_t steps = 0;
};

/// Diagnostics of a single state. Without a source, E drops the -(1/r) int |u|^r term.
EnergyRecord diagnostics(const ScalarField& u, const ExponentSamples& p, double r, double E1,
                         bool with_source = true);

/// The right-hand side of the evolution for one configuration, with p sampled once.
class Model {
 public:
  explicit Model(const SimConfig& config);

  const ExponentSamples& exponent() const { return p_; }
  const SimConfig& config() const { return config_; }
  Scheme scheme() const { return scheme_; }

  ScalarField source(const ScalarField& u) const;
  ScalarField rate(const ScalarField& u) const;
  /// Max over cells of the source's Lipschitz scale |r - 1| |u|^(r-2).
  double source_rate_bound(const ScalarField& u) const;

  ScalarField explicit_step(const ScalarField& u, double dt) const;
  /// Diffusivity lagged at u, source explicit: (I - dt L_D) u_new = u + dt f(u).
  ScalarField semi_implicit_step(const ScalarField& u, double dt) const;

 private:
  SimConfig config_;
  ExponentSamples p_;
  Scheme scheme_;
};

/// safety * min(h^2 / (2 N D_max), 1 / (R_max + delta)).
double stable_dt(const ScalarField& u, const ExponentSamples& p, double r, double safety, double eps_reg);

/// One forward-Euler update u + dt (px_laplacian(u) + source(u)).
ScalarField step(const ScalarField& u, const SimConfig& config, double dt);

SimResult run(const SimConfig& config);

}  // namespace pxlab
