#include "ionphase/scenario.hpp"

#include <cmath>

#include "ionphase/errors.hpp"

namespace ionphase::experiments {

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::kRamsey: return "ramsey";
    case ScenarioId::kParityScan: return "parity_scan";
    case ScenarioId::kSidebandShift: return "sideband_shift";
    case ScenarioId::kRandomPhase: return "random_phase";
    case ScenarioId::kStability: return "stability";
    case ScenarioId::kAlignment: return "alignment";
  }
  return "?";
}

std::vector<std::string> known_scenarios() {
  return {"ramsey", "parity_scan", "sideband_shift", "random_phase", "stability", "alignment"};
}

namespace {

ScenarioId scenario_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(ScenarioId::kAlignment); ++i) {
    if (to_string(static_cast<ScenarioId>(i)) == s) return static_cast<ScenarioId>(i);
  }
  std::string known;
  for (const auto& k : known_scenarios()) known += (known.empty() ? "" : ", ") + k;
  throw ConfigError("unknown scenario id '" + s + "' (known: " + known + ")");
}

}  // namespace

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out.push_back(start + (stop - start) * static_cast<double>(i) / (points - 1));
  }
  return out;
}

void ScenarioConfig::validate() const {
  if (sweep.points < 2) throw ConfigError("scenario: sweep needs at least 2 points");
  if (shots < 1) throw ConfigError("scenario: shots must be >= 1");
  if (analysis_points < 3) throw ConfigError("scenario: analysis_points must be >= 3");
  if (noise.detection_error < 0.0 || noise.detection_error > 1.0) {
    throw ConfigError("scenario: detection_error must lie in [0, 1]");
  }
  if (noise.parity_contrast < 0.0 || noise.parity_contrast > 1.0) {
    throw ConfigError("scenario: parity_contrast must lie in [0, 1]");
  }
  if (!(geometry.delta_k_rad_per_m > 0.0)) {
    throw ConfigError("scenario: geometry delta_k must be > 0");
  }
  if (id == ScenarioId::kStability && !chain) {
    throw ConfigError("scenario: stability runs need a [chain] section");
  }
}

ScenarioConfig scenario_from_config(const cfg::ConfigFile& c) {
  if (c.require_int("schema_version") != 1) {
    throw ConfigError(c.origin() + ": unsupported schema_version (expected 1)");
  }

  ScenarioConfig s;
  s.id = scenario_from_string(c.require_string("scenario.id"));
  s.sweep.name = c.require_string("scenario.sweep_name");
  s.sweep.start = c.require_double("scenario.sweep_start");
  s.sweep.stop = c.require_double("scenario.sweep_stop");
  s.sweep.points = static_cast<int>(c.require_int("scenario.sweep_points"));
  s.shots = static_cast<int>(c.get_int("scenario.shots", 500));
  s.exact = c.get_string("scenario.sampling", "shots") == "exact";
  s.seed = c.get_u64("scenario.seed", 1);
  s.record_noise = c.get_bool("scenario.record_noise", true);
  s.point_duration_s = c.get_double("scenario.point_duration_s", 1.0);
  s.analysis_points = static_cast<int>(c.get_int("scenario.analysis_points", 24));
  s.analysis_shots = static_cast<int>(c.get_int("scenario.analysis_shots", 0));
  s.phi_prime_rad = c.get_double("scenario.phi_prime_rad", 0.0);
  s.phi0_rad = c.get_double("scenario.phi0_rad", 0.0);
  s.microwave_phase_rad = c.get_double("scenario.microwave_phase_rad", 0.0);
  s.raman_phase_rad = c.get_double("scenario.raman_phase_rad", 0.0);
  s.feed_forward = c.get_bool("scenario.feed_forward", true);

  const std::string source = c.get_string("scenario.analysis_source", "microwave");
  if (source == "microwave") {
    s.analysis_source = AnalysisSource::kMicrowave;
  } else if (source == "raman") {
    s.analysis_source = AnalysisSource::kRaman;
  } else {
    throw ConfigError("scenario.analysis_source must be 'microwave' or 'raman'");
  }

  const std::string sideband = c.get_string("scenario.sideband", "red");
  if (sideband == "red") {
    s.sideband = SidebandChoice::kRed;
  } else if (sideband == "blue") {
    s.sideband = SidebandChoice::kBlue;
  } else if (sideband == "both") {
    s.sideband = SidebandChoice::kBoth;
  } else {
    throw ConfigError("scenario.sideband must be 'red', 'blue' or 'both'");
  }

  const std::string redraw = c.get_string("scenario.random_phase_redraw", "per_shot");
  if (redraw == "per_shot") {
    s.random_phase_redraw = RedrawMode::kPerShot;
  } else if (redraw == "per_point") {
    s.random_phase_redraw = RedrawMode::kPerPoint;
  } else {
    throw ConfigError("scenario.random_phase_redraw must be 'per_shot' or 'per_point'");
  }
  if (c.has("scenario.random_phase_constant_rad")) {
    s.random_phase_constant_rad = c.require_double("scenario.random_phase_constant_rad");
  }

  s.noise.dephasing_tau_s = c.get_double("noise.dephasing_tau_s", 0.0);
  s.noise.path_step_m_per_sqrt_s = c.get_double("noise.path_step_m_per_sqrt_s", 0.0);
  s.noise.detection_error = c.get_double("noise.detection_error", 0.0);
  s.noise.parity_contrast = c.get_double("noise.parity_contrast", 1.0);
  s.noise.rep_walk_hz_per_sqrt_h = c.get_double("noise.rep_walk_hz_per_sqrt_h", 0.0);
  s.noise.rep_walk_interval_s = c.get_double("noise.rep_walk_interval_s", 3600.0);

  const std::string kind = c.get_string("geometry.kind", "insensitive");
  if (kind == "insensitive") {
    s.geometry.geometry = qubits::Geometry::kInsensitive;
  } else if (kind == "sensitive") {
    s.geometry.geometry = qubits::Geometry::kSensitive;
  } else {
    throw ConfigError("geometry.kind must be 'insensitive' or 'sensitive'");
  }
  if (c.has("geometry.lambda_prime_nm")) {
    s.geometry.delta_k_rad_per_m = qubits::kTwoPi / (c.require_double("geometry.lambda_prime_nm") * 1e-9);
  } else if (c.has("geometry.delta_k_rad_per_m")) {
    s.geometry.delta_k_rad_per_m = c.require_double("geometry.delta_k_rad_per_m");
  }
  auto positions = c.get_double_list("geometry.ion_positions_um", {-2.5, 2.5});
  if (positions.size() != 2) throw ConfigError("geometry.ion_positions_um must list two positions");
  s.geometry.ion_position_m = {positions[0] * 1e-6, positions[1] * 1e-6};
  s.geometry.misalignment_rad =
      c.get_double("geometry.misalignment_deg", 0.0) * (qubits::kTwoPi / 360.0);

  if (s.id == ScenarioId::kStability || !c.keys_with_prefix("chain.").empty()) {
    s.chain = chain_presets::chain_from_config(c);
  }

  s.validate();
  return s;
}

}  // namespace ionphase::experiments
