#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pxlab/checks.hpp"
#include "pxlab/eigen.hpp"
#include "pxlab/io.hpp"
#include "pxlab/simulator.hpp"
#include "pxlab/theory.hpp"

namespace pxlab {

struct EmbeddingOptions {
  int restarts = 4;
  int iters = 60;
};

struct EigenOptions {
  double tol = 1e-9;
  int max_iters = 500;
};

/// Check names accepted in "checks".
const std::vector<std::string>& known_checks();

struct ExperimentConfig {
  SimConfig sim;
  bool compute_constants = true;
  std::vector<std::string> checks;
  EmbeddingOptions embedding;
  EigenOptions eigen;
  std::uint64_t seed = kDefaultSeed;
  double barrier_T = 0.0;  // 0 selects t_max
};

ExperimentConfig experiment_config_from_json(const json& j);
json to_json(const ExperimentConfig& c);

struct ConstantsBundle {
  TheoryInputs inputs;
  TheoryConstants constants;
  RegimeReport regime;
};

/// Initial diagnostics, embedding estimates, constants and classification.
ConstantsBundle evaluate_constants(const ExperimentConfig& cfg);

/// Epsilon used for the barrier: half the smaller of the printed and the sufficient bound.
double barrier_epsilon(const EigenPair& pair, const ScalarField& u0, double r, double p_minus);

struct ExperimentOutcome {
  int exit_code = 0;
  json report;
  SimResult result;
  std::optional<ConstantsBundle> constants;
  std::vector<CheckResult> checks;
  std::vector<CheckResult> sensitivity;  // informational; never affects the exit code
  std::optional<EigenPair> eigen;
};

/// Exit code 0 when every requested check passes, 2 otherwise.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Constants and classification only.
json constants_report(const ExperimentConfig& cfg, const ConstantsBundle& b);

/// report.json, series.csv and final_field.csv.
void write_experiment(const ExperimentOutcome& out, const std::filesystem::path& dir);

struct SweepSpec {
  ExperimentConfig base;
  std::vector<double> p_minus;
  std::vector<double> p_offset;
  std::vector<double> r;
  std::vector<double> amplitude;
  std::size_t max_runs = 1000;
  int workers = 0;  // 0 selects the hardware concurrency
};

SweepSpec sweep_spec_from_json(const json& j);

struct PhaseRow {
  double p_minus = 0.0;
  double p_plus = 0.0;
  double r = 0.0;
  double amplitude = 0.0;
  std::string predicted_regime;
  std::string observed_event;
  std::string agreement;  // yes | no | n/a | error
  std::string error;
};

inline constexpr const char* kPhaseHeader = "p_minus,p_plus,r,amplitude,predicted_regime,observed_event,agreement";

/// One row per cell, in axis order (amplitude fastest); cells run concurrently.
std::vector<PhaseRow> run_sweep(const SweepSpec& spec);
void write_phase_csv(std::ostream& os, const std::vector<PhaseRow>& rows);

}  // namespace pxlab
