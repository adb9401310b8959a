#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "ionphase/chain.hpp"
#include "ionphase/config.hpp"
#include "ionphase/planner.hpp"

namespace ionphase::chain_presets {

enum class Preset { kThreePll, kSinglePll };

std::string to_string(Preset p);
Preset preset_from_string(const std::string& s);

/// Everything needed to instantiate a preset chain.  All phase knobs default
/// to zero; scenario configs override them to inject static offsets.
struct PresetParams {
  double master_hz = 12.606e9;
  double master_phase_rad = 0.0;
  double rep_rate_hz = 80.57e6;
  chain::DriftProfile drift;
  int tooth_min = 0;
  int tooth_max = 200;
  double comb_phase_rad = 0.0;

  double qubit_hz = 12.64282e9;
  double mode_hz = 2.5e6;
  double detuning_hz = 10e3;

  planner::Window aom_a_window{60e6, 180e6};
  planner::Window aom_b_window{150e6, 180e6};

  planner::GatePlan gate;
  std::optional<planner::CoPropPlan> copropagating;

  double aom_a_drive_phase_rad = 0.0;
  double awg_red_phase_rad = 0.0;
  double awg_blue_phase_rad = 0.0;
  double awg_microwave_phase_rad = 0.0;
  double awg_coprop_direct_phase_rad = 0.0;
  double awg_coprop_mix_phase_rad = 0.0;
  double pll_phase_rad[3] = {0.0, 0.0, 0.0};
};

/// Stock parameter sets reproducing the stock operating point.
PresetParams stock_params_three_pll();
PresetParams stock_params_single_pll();

/// Builds the phase-coherence circuit for the chosen preset, wired and
/// programmed for the entangling gate (switch a=3, b=1).  Throws
/// ConstraintError when the plan cannot be realized (tones outside AOM
/// bands, wrong tooth relations for the preset).
chain::ChainGraph build_preset(Preset preset, const PresetParams& params);

/// Copy of `g` with switch positions and the AWG program set for the given
/// transition family (gate / copropagating carrier / microwave).
chain::ChainGraph configure_for(const chain::ChainGraph& g, chain::Transition t);

/// Loads [chain] (+ [plan]) sections: preset kind, overrides, and the plan
/// (solved from [plan] by default, or given explicitly).
struct ChainConfig {
  Preset preset;
  PresetParams params;
};
ChainConfig chain_from_config(const cfg::ConfigFile& c);

/// Planner input from the [plan] section.
planner::PlannerInput planner_input_from_config(const cfg::ConfigFile& c);

nlohmann::ordered_json to_json(const chain::ChainGraph& g);

}  // namespace ionphase::chain_presets
