#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ionphase/fitting.hpp"
#include "ionphase/scenario.hpp"

namespace ionphase::experiments {

struct RunPoint {
  double x = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> aux;
};

/// Tabular record of one scenario sweep.  Deterministic: identical
/// (config, seed) pairs produce bit-identical results, independent of the
/// execution policy, because every point draws from its own substream.
struct RunResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string sweep_name;
  std::string observable_name;
  std::vector<std::string> aux_names;
  std::vector<RunPoint> points;
};

/// kSerial is the reference path; kParallel runs sweep points under OpenMP
/// and must produce the identical result (covered by tests and the bench).
enum class Exec { kSerial, kParallel };

RunResult run_scenario(const ScenarioConfig& config, Exec exec = Exec::kParallel);

RunResult run_ramsey(const ScenarioConfig& config, Exec exec = Exec::kParallel);
RunResult run_parity_scan(const ScenarioConfig& config, Exec exec = Exec::kParallel);
RunResult run_sideband_shift(const ScenarioConfig& config, Exec exec = Exec::kParallel);
RunResult run_random_phase(const ScenarioConfig& config, Exec exec = Exec::kParallel);
RunResult run_stability(const ScenarioConfig& config, Exec exec = Exec::kParallel);
RunResult run_alignment_scan(const ScenarioConfig& config, Exec exec = Exec::kParallel);

/// Scenario-appropriate analysis of a finished run: sinusoid fit, decay fit,
/// slope of fitted phases, or phase spread.
struct RunSummary {
  std::string text;
  std::optional<SinusoidFit> sinusoid;
  std::optional<GaussianDecayFit> decay;
  std::optional<double> slope;
  std::optional<double> spread_deg;
};

RunSummary summarize(const ScenarioConfig& config, const RunResult& result);

/// Entangled-state fidelity estimate from the two dominant error sources.
/// Both the even-population sum and the parity-fringe amplitude are reduced
/// multiplicatively by each error, so the estimate is
/// (1 - thermal) * (1 - detection).
struct ErrorBudget {
  double even_population = 1.0;
  double parity_amplitude = 1.0;
  double fidelity = 1.0;
};

ErrorBudget error_budget(double thermal_error, double detection_error);

}  // namespace ionphase::experiments
