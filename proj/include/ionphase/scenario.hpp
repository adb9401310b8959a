#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ionphase/chain_presets.hpp"
#include "ionphase/config.hpp"
#include "ionphase/qubits.hpp"

namespace ionphase::experiments {

enum class ScenarioId {
  kRamsey,
  kParityScan,
  kSidebandShift,
  kRandomPhase,
  kStability,
  kAlignment,
};

std::string to_string(ScenarioId id);
std::vector<std::string> known_scenarios();

struct SweepSpec {
  std::string name;
  double start = 0.0;
  double stop = 1.0;
  int points = 2;

  std::vector<double> values() const;
};

struct NoiseSpec {
  double dephasing_tau_s = 0.0;  // 0 or negative means "no dephasing"
  double path_step_m_per_sqrt_s = 0.0;
  double detection_error = 0.0;
  double parity_contrast = 1.0;
  double rep_walk_hz_per_sqrt_h = 0.0;
  double rep_walk_interval_s = 3600.0;
};

enum class AnalysisSource { kMicrowave, kRaman };
enum class SidebandChoice { kRed, kBlue, kBoth };
enum class RedrawMode { kPerShot, kPerPoint };

/// One fully specified, seeded run.  Everything that affects the output is
/// in here; identical configs and seeds give bit-identical results.
struct ScenarioConfig {
  ScenarioId id = ScenarioId::kParityScan;
  SweepSpec sweep;
  int shots = 500;
  bool exact = false;  // emit expectation values instead of sampling
  NoiseSpec noise;
  qubits::BeamGeometry geometry;
  AnalysisSource analysis_source = AnalysisSource::kMicrowave;
  double phi_prime_rad = 0.0;  // static offset of Raman-referenced analysis pulses
  double phi0_rad = 0.0;       // static offset of Raman rotations (fringe scans)
  std::uint64_t seed = 1;
  bool record_noise = true;
  double point_duration_s = 1.0;  // wall time per sweep point for drift sampling

  // phase-fit scenarios (sideband shift, stability): inner analysis scan
  int analysis_points = 24;
  int analysis_shots = 0;  // 0 -> use `shots`

  // sideband_shift
  SidebandChoice sideband = SidebandChoice::kRed;

  // random_phase
  RedrawMode random_phase_redraw = RedrawMode::kPerShot;
  std::optional<double> random_phase_constant_rad;

  // ramsey
  double microwave_phase_rad = 0.0;
  double raman_phase_rad = 0.0;

  // stability
  bool feed_forward = true;
  std::optional<chain_presets::ChainConfig> chain;

  void validate() const;  // throws ConfigError
};

/// Parses [scenario], [noise], [geometry] (and [chain] for stability runs).
ScenarioConfig scenario_from_config(const cfg::ConfigFile& c);

}  // namespace ionphase::experiments
