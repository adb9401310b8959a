#include "ionphase/chain_presets.hpp"

#include <cmath>
#include <sstream>

#include "ionphase/errors.hpp"

namespace ionphase::chain_presets {

using chain::Aom;
using chain::Awg;
using chain::ChainGraph;
using chain::CombSource;
using chain::Mixer;
using chain::Node;
using chain::Oscillator;
using chain::Pll;
using chain::PresetInfo;
using chain::Switch;
using chain::Tone;
using chain::Transition;

std::string to_string(Preset p) {
  return p == Preset::kThreePll ? "three_pll" : "single_pll";
}

Preset preset_from_string(const std::string& s) {
  if (s == "three_pll") return Preset::kThreePll;
  if (s == "single_pll") return Preset::kSinglePll;
  throw ConfigError("unknown chain preset '" + s + "' (known: three_pll, single_pll)");
}

namespace {

void check_plan(const PresetParams& p) {
  planner::PlannerInput in;
  in.qubit_hz = p.qubit_hz;
  in.mode_hz = p.mode_hz;
  in.detuning_hz = p.detuning_hz;
  in.rep_rate_hz = p.rep_rate_hz;
  in.aom_a_window = p.aom_a_window;
  in.aom_b_window = p.aom_b_window;
  in.tooth_min = p.tooth_min;
  in.tooth_max = p.tooth_max;
  auto report = planner::validate_plan(p.gate, in);
  if (!report.aom_a_in_window) {
    throw ConstraintError("preset: node 'aom_a' cannot be driven at " +
                          std::to_string(p.gate.aom_a_hz / 1e6) + " MHz (outside its band)");
  }
  if (!report.red_in_window || !report.blue_in_window) {
    throw ConstraintError("preset: node 'aom_b' cannot host the plan tones " +
                          std::to_string(p.gate.red_drive_hz / 1e6) + " / " +
                          std::to_string(p.gate.blue_drive_hz / 1e6) + " MHz (outside its band)");
  }
  if (std::abs(report.residual_red_hz) > planner::kResidualToleranceHz ||
      std::abs(report.residual_blue_hz) > planner::kResidualToleranceHz) {
    throw ConstraintError("preset: gate plan is inconsistent with the qubit targets");
  }
  if (p.copropagating) {
    auto rep = planner::validate_plan(*p.copropagating, in);
    if (!rep.ok()) {
      throw ConstraintError("preset: node 'aom_b' cannot host the copropagating plan tones");
    }
  }
  if (p.gate.red_tooth < p.tooth_min || p.gate.red_tooth > p.tooth_max ||
      p.gate.blue_tooth < p.tooth_min || p.gate.blue_tooth > p.tooth_max) {
    throw ConstraintError("preset: plan tooth indices outside the comb tooth range");
  }
}

/// One AOM B drive arm: an AWG channel mixed against a lock beat.
struct ArmPlan {
  double awg_hz = 0.0;
  Mixer::Mode mode = Mixer::Mode::kDifference;
};

/// Realizes a drive `target_hz` from a lock beat at `lock_hz`.  The drive
/// tone must carry the comb drift with sign `needed_sense` (+1: rides with
/// the tooth it pairs with, -1: against it) for the ion-level beat to stay
/// drift-free; `lock_sense` is the sign the lock itself carries.  Matching
/// senses keep the lock on the dominant side of the mixer (sum, or
/// lock-minus-AWG difference); opposite senses put the AWG on top.
ArmPlan make_arm(double lock_hz, int lock_sense, int needed_sense, double target_hz,
                 const std::string& arm) {
  ArmPlan a;
  if (lock_sense == needed_sense) {
    if (target_hz > lock_hz) {
      a = {target_hz - lock_hz, Mixer::Mode::kSum};
    } else {
      a = {lock_hz - target_hz, Mixer::Mode::kDifference};
    }
  } else {
    a = {target_hz + lock_hz, Mixer::Mode::kDifference};
  }
  if (a.awg_hz < 1e3) {
    throw ConstraintError("preset: " + arm + " drive coincides with its lock beat-note");
  }
  return a;
}

struct DerivedFrequencies {
  double pll_red_hz = 0.0;      // beat the red-path lock follows
  double pll_blue_hz = 0.0;     // three-lock preset only
  double pll_carrier_hz = 0.0;  // copropagating lock (or the single lock)
  ArmPlan red, blue, carrier;
  double awg_microwave_hz = 0.0;
  double awg_coprop_direct_hz = 0.0;
};

/// AWG frequencies follow from the lock relations: each AOM B tone is a
/// mixer product of a feed-forward lock and an AWG channel, chosen so the
/// comb tooth spacing cancels out of the ion-level beat-note.  They are
/// derived here rather than hardcoded: the derived values are the ones that
/// make the chain self-consistent.
DerivedFrequencies derive_three_pll(const PresetParams& p) {
  DerivedFrequencies d;
  d.pll_red_hz = p.gate.red_tooth * p.rep_rate_hz - p.master_hz;
  d.pll_blue_hz = p.master_hz - p.gate.blue_tooth * p.rep_rate_hz;
  if (d.pll_red_hz <= 0.0) {
    throw ConstraintError("preset three_pll: red tooth beat must sit above the master oscillator");
  }
  if (d.pll_blue_hz <= 0.0) {
    throw ConstraintError("preset three_pll: blue tooth beat must sit below the master oscillator");
  }
  d.red = make_arm(d.pll_red_hz, +1, +1, p.gate.red_drive_hz, "red arm");
  d.blue = make_arm(d.pll_blue_hz, -1, -1, p.gate.blue_drive_hz, "blue arm");
  d.awg_microwave_hz = p.qubit_hz - p.master_hz;
  if (p.copropagating) {
    d.pll_carrier_hz = p.copropagating->tooth * p.rep_rate_hz - p.master_hz;
    if (d.pll_carrier_hz <= 0.0) {
      throw ConstraintError("preset three_pll: carrier tooth beat must sit above the master oscillator");
    }
    d.awg_coprop_direct_hz = p.copropagating->drive1_hz;
    d.carrier = make_arm(d.pll_carrier_hz, +1, +1, p.copropagating->drive2_hz, "carrier arm");
  }
  return d;
}

DerivedFrequencies derive_single_pll(const PresetParams& p) {
  if (p.gate.red_tooth != p.gate.blue_tooth) {
    throw ConstraintError("preset single_pll: requires a single-tooth plan (n == m)");
  }
  if (p.copropagating && p.copropagating->tooth != p.gate.red_tooth) {
    throw ConstraintError("preset single_pll: copropagating tooth must equal the gate tooth");
  }
  DerivedFrequencies d;
  d.pll_carrier_hz = p.gate.red_tooth * p.rep_rate_hz - p.master_hz;
  if (d.pll_carrier_hz <= 0.0) {
    throw ConstraintError("preset single_pll: tooth beat must sit above the master oscillator");
  }
  // One lock rides with the tooth, so the red drive stacks on top of it and
  // the blue drive is generated against it.
  d.red = make_arm(d.pll_carrier_hz, +1, +1, p.gate.red_drive_hz, "red arm");
  d.blue = make_arm(d.pll_carrier_hz, +1, -1, p.gate.blue_drive_hz, "blue arm");
  d.awg_microwave_hz = p.qubit_hz - p.master_hz;
  if (p.copropagating) {
    d.awg_coprop_direct_hz = p.copropagating->drive1_hz;
    d.carrier = make_arm(d.pll_carrier_hz, +1, +1, p.copropagating->drive2_hz, "carrier arm");
  }
  return d;
}

PresetInfo make_info(Preset preset, const PresetParams& p, const DerivedFrequencies& d) {
  PresetInfo info;
  info.preset_id = to_string(preset);
  info.qubit_hz = p.qubit_hz;
  info.mode_hz = p.mode_hz;
  info.detuning_hz = p.detuning_hz;
  info.master_hz = p.master_hz;
  info.rep_rate_hz = p.rep_rate_hz;
  info.red_tooth = p.gate.red_tooth;
  info.blue_tooth = p.gate.blue_tooth;
  info.aom_a_sign = p.gate.aom_a_sign;
  info.aom_a_hz = p.gate.aom_a_hz;
  info.red_drive_hz = p.gate.red_drive_hz;
  info.blue_drive_hz = p.gate.blue_drive_hz;
  if (p.copropagating) {
    info.coprop_tooth = p.copropagating->tooth;
    info.coprop_drive1_hz = p.copropagating->drive1_hz;
    info.coprop_drive2_hz = p.copropagating->drive2_hz;
  }
  info.gate = {3, 1, {Tone{d.red.awg_hz, p.awg_red_phase_rad}, Tone{d.blue.awg_hz, p.awg_blue_phase_rad}}};
  info.microwave = {1, 1, {Tone{d.awg_microwave_hz, p.awg_microwave_phase_rad}}};
  info.copropagating = {2, 2,
                        {Tone{d.awg_coprop_direct_hz, p.awg_coprop_direct_phase_rad},
                         Tone{d.carrier.awg_hz, p.awg_coprop_mix_phase_rad}}};
  return info;
}

constexpr double kBeatMixerLo = 20e6;
constexpr double kBeatMixerHi = 450e6;

void check_lock(double beat_hz, const std::string& name) {
  if (beat_hz < kBeatMixerLo || beat_hz > kBeatMixerHi) {
    throw ConstraintError("preset: lock beat for '" + name + "' at " +
                          std::to_string(beat_hz / 1e6) +
                          " MHz falls outside the beat mixer passband");
  }
}

}  // namespace

// Circuit layout (both presets):
//   comb + master -> beat_mixer (difference) -> PLL(s)
//   awg -> route_select: port 1 -> microwave_mixer (sum with master; horn)
//                        port 2 -> carrier arm (direct tone + sum mixer)
//                        port 3 -> gate arms (one mixer per sideband)
//   gate/carrier arms -> aom_b_select -> AOM B (optical input: comb)
//   aom_a_source -> AOM A (optical input: comb)
// The reference circuit combines both PLL outputs into one mixer; ideal
// mixing is bilinear, so one mixer per PLL arm produces the identical tone
// set while keeping every mixer two-ported.
ChainGraph build_preset(Preset preset, const PresetParams& p) {
  check_plan(p);
  const DerivedFrequencies d =
      preset == Preset::kThreePll ? derive_three_pll(p) : derive_single_pll(p);

  ChainGraph g;
  g.preset_id = to_string(preset);

  g.add_node({"master_osc", Oscillator{p.master_hz, p.master_phase_rad}});
  g.add_node({"comb", CombSource{p.rep_rate_hz, p.drift, p.tooth_min, p.tooth_max, p.comb_phase_rad}});
  g.add_node({"beat_mixer", Mixer{Mixer::Mode::kDifference, kBeatMixerLo, kBeatMixerHi}});
  g.add_edge({"comb", "beat_mixer"});
  g.add_edge({"master_osc", "beat_mixer"});

  const double b_lo = p.aom_b_window.lo_hz;
  const double b_hi = p.aom_b_window.hi_hz;

  if (preset == Preset::kThreePll) {
    check_lock(d.pll_red_hz, "pll_red");
    check_lock(d.pll_blue_hz, "pll_blue");
    g.add_node({"pll_red", Pll{d.pll_red_hz, +1, d.pll_red_hz, true, p.pll_phase_rad[0]}});
    g.add_node({"pll_blue", Pll{d.pll_blue_hz, -1, d.pll_blue_hz, true, p.pll_phase_rad[1]}});
    g.add_edge({"beat_mixer", "pll_red"});
    g.add_edge({"beat_mixer", "pll_blue"});
    if (p.copropagating) {
      check_lock(d.pll_carrier_hz, "pll_carrier");
      g.add_node({"pll_carrier", Pll{d.pll_carrier_hz, +1, d.pll_carrier_hz, true, p.pll_phase_rad[2]}});
      g.add_edge({"beat_mixer", "pll_carrier"});
    }
  } else {
    check_lock(d.pll_carrier_hz, "pll_lock");
    g.add_node({"pll_lock", Pll{d.pll_carrier_hz, +1, d.pll_carrier_hz, true, p.pll_phase_rad[0]}});
    g.add_edge({"beat_mixer", "pll_lock"});
  }

  g.add_node({"awg", Awg{}});
  g.add_node({"route_select", Switch{3}});
  g.add_edge({"awg", "route_select"});

  g.add_node({"microwave_mixer",
              Mixer{Mixer::Mode::kSum, p.qubit_hz - 0.2e9, p.qubit_hz + 0.2e9}});
  g.add_edge({"master_osc", "microwave_mixer"});
  g.add_edge({"route_select", "microwave_mixer", 1, 0});

  const std::string gate_lock = preset == Preset::kThreePll ? "pll_red" : "pll_lock";
  const std::string blue_lock = preset == Preset::kThreePll ? "pll_blue" : "pll_lock";
  g.add_node({"red_arm_mixer", Mixer{d.red.mode, b_lo, b_hi}});
  g.add_edge({gate_lock, "red_arm_mixer"});
  g.add_edge({"route_select", "red_arm_mixer", 3, 0});
  g.add_node({"blue_arm_mixer", Mixer{d.blue.mode, b_lo, b_hi}});
  g.add_edge({blue_lock, "blue_arm_mixer"});
  g.add_edge({"route_select", "blue_arm_mixer", 3, 0});

  g.add_node({"aom_b_select", Switch{1}});
  g.add_edge({"red_arm_mixer", "aom_b_select", 0, 1});
  g.add_edge({"blue_arm_mixer", "aom_b_select", 0, 1});

  if (p.copropagating) {
    const std::string carrier_pll = preset == Preset::kThreePll ? "pll_carrier" : "pll_lock";
    g.add_node({"carrier_arm_mixer", Mixer{d.carrier.mode, b_lo, b_hi}});
    g.add_edge({carrier_pll, "carrier_arm_mixer"});
    g.add_edge({"route_select", "carrier_arm_mixer", 2, 0});
    g.add_edge({"carrier_arm_mixer", "aom_b_select", 0, 2});
    g.add_edge({"route_select", "aom_b_select", 2, 2});  // direct tone, no mixing
  }

  g.add_node({"aom_a_source", Oscillator{p.gate.aom_a_hz, p.aom_a_drive_phase_rad}});
  g.add_node({"aom_a",
              Aom{p.aom_a_window.center_hz(), p.aom_a_window.width_hz(), -p.gate.aom_a_sign, {}}});
  g.add_edge({"comb", "aom_a"});
  g.add_edge({"aom_a_source", "aom_a"});

  g.add_node({"aom_b", Aom{p.aom_b_window.center_hz(), p.aom_b_window.width_hz(), +1, {}}});
  g.add_edge({"comb", "aom_b"});
  g.add_edge({"aom_b_select", "aom_b"});

  g.set_preset_info(make_info(preset, p, d));
  ChainGraph configured = g.with_awg_tones("awg", g.preset_info()->gate.awg_tones);
  configured.validate();
  return configured;
}

ChainGraph configure_for(const ChainGraph& g, Transition t) {
  const auto& info_opt = g.preset_info();
  if (!info_opt) throw ConfigurationError("configure_for requires a preset-built chain");
  const PresetInfo& info = *info_opt;
  const chain::OperationProfile* p = nullptr;
  switch (t) {
    case Transition::kRedSideband:
    case Transition::kBlueSideband:
      p = &info.gate;
      break;
    case Transition::kMicrowave:
      p = &info.microwave;
      break;
    case Transition::kCarrierCopropagating:
      p = &info.copropagating;
      break;
  }
  return g.with_switch_position(info.switch_a_node, p->switch_a)
      .with_switch_position(info.switch_b_node, p->switch_b)
      .with_awg_tones("awg", p->awg_tones);
}

PresetParams stock_params_three_pll() {
  PresetParams p;
  planner::PlannerInput in;  // defaults carry the stock operating point
  p.gate = planner::make_gate_plan(in, 160, 154, +1, 77.5e6);
  auto coprop = planner::plan_copropagating(in);
  p.copropagating = coprop.plans.at(0);  // tooth 157, symmetric pair
  return p;
}

PresetParams stock_params_single_pll() {
  PresetParams p;
  planner::PlannerInput in;
  p.gate = planner::make_gate_plan(in, 157, 157, -1, 160e6);
  auto coprop = planner::plan_copropagating(in);
  p.copropagating = coprop.plans.at(0);
  return p;
}

planner::PlannerInput planner_input_from_config(const cfg::ConfigFile& c) {
  planner::PlannerInput in;
  in.qubit_hz = c.require_double("plan.qubit_mhz") * 1e6;
  in.mode_hz = c.get_double("plan.mode_mhz", 2.5) * 1e6;
  in.detuning_hz = c.get_double("plan.detuning_khz", 10.0) * 1e3;
  in.rep_rate_hz = c.require_double("plan.rep_rate_mhz") * 1e6;
  in.aom_a_candidates_hz = c.get_double_list("plan.aom_a_candidates_mhz", {77.5});
  for (auto& f : in.aom_a_candidates_hz) f *= 1e6;
  const double b_center = c.get_double("plan.aom_b_center_mhz", 165.0) * 1e6;
  const double b_bw = c.get_double("plan.aom_b_bandwidth_mhz", 30.0) * 1e6;
  in.aom_b_window = {b_center - 0.5 * b_bw, b_center + 0.5 * b_bw};
  // AOM A defaults to the AOM B window unless overridden.
  const double a_center = c.get_double("plan.aom_a_center_mhz", b_center / 1e6) * 1e6;
  const double a_bw = c.get_double("plan.aom_a_bandwidth_mhz", b_bw / 1e6) * 1e6;
  in.aom_a_window = {a_center - 0.5 * a_bw, a_center + 0.5 * a_bw};
  std::vector<double> signs = c.get_double_list("plan.aom_a_signs", {+1, -1});
  in.aom_a_signs.clear();
  for (double s : signs) in.aom_a_signs.push_back(s >= 0 ? +1 : -1);
  in.tooth_min = static_cast<int>(c.get_int("plan.tooth_min", 100));
  in.tooth_max = static_cast<int>(c.get_int("plan.tooth_max", 200));
  in.validate();
  return in;
}

ChainConfig chain_from_config(const cfg::ConfigFile& c) {
  ChainConfig out;
  out.preset = preset_from_string(c.get_string("chain.preset", "three_pll"));

  PresetParams& p = out.params;
  p.master_hz = c.get_double("chain.master_mhz", 12606.0) * 1e6;
  p.tooth_min = static_cast<int>(c.get_int("chain.tooth_min", 0));
  p.tooth_max = static_cast<int>(c.get_int("chain.tooth_max", 200));

  planner::PlannerInput in = planner_input_from_config(c);
  if (c.has("chain.rep_rate_mhz")) {
    in.rep_rate_hz = c.require_double("chain.rep_rate_mhz") * 1e6;
  }
  p.rep_rate_hz = in.rep_rate_hz;
  p.qubit_hz = in.qubit_hz;
  p.mode_hz = in.mode_hz;
  p.detuning_hz = in.detuning_hz;
  p.aom_a_window = in.aom_a_window;
  p.aom_b_window = in.aom_b_window;

  if (c.has("chain.drift.times_s")) {
    auto times = c.require_double_list("chain.drift.times_s");
    auto values = c.require_double_list("chain.drift.values_hz");
    p.drift = chain::DriftProfile(times, values);
  }

  const std::string source = c.get_string("chain.plan_source", "solve");
  if (source == "explicit") {
    p.gate = planner::make_gate_plan(
        in, static_cast<int>(c.require_int("chain.plan.red_tooth")),
        static_cast<int>(c.require_int("chain.plan.blue_tooth")),
        static_cast<int>(c.get_int("chain.plan.aom_a_sign", +1)),
        c.require_double("chain.plan.aom_a_mhz") * 1e6);
  } else if (source == "solve") {
    auto plans = planner::plan_gate(in);
    const planner::GatePlan* chosen = nullptr;
    for (const auto& plan : plans.plans) {
      if (out.preset == Preset::kSinglePll && plan.red_tooth != plan.blue_tooth) continue;
      if (out.preset == Preset::kThreePll &&
          (plan.red_tooth * in.rep_rate_hz <= p.master_hz ||
           plan.blue_tooth * in.rep_rate_hz >= p.master_hz)) {
        continue;
      }
      chosen = &plan;
      break;
    }
    if (!chosen) {
      throw ConstraintError("chain: no plan realizable by preset " + to_string(out.preset) +
                            (plans.plans.empty() ? " (" + plans.diagnostics + ")" : ""));
    }
    p.gate = *chosen;
  } else {
    throw ConfigError("chain.plan_source must be 'solve' or 'explicit'");
  }

  auto coprop = planner::plan_copropagating(in);
  for (const auto& plan : coprop.plans) {
    if (out.preset == Preset::kSinglePll && plan.tooth != p.gate.red_tooth) continue;
    out.params.copropagating = plan;
    break;
  }

  // Static phase knobs (all default 0); the PLL entries double as the
  // additive phase-noise hook.
  p.master_phase_rad = c.get_double("chain.master_phase_rad", 0.0);
  p.comb_phase_rad = c.get_double("chain.comb_phase_rad", 0.0);
  p.aom_a_drive_phase_rad = c.get_double("chain.aom_a_drive_phase_rad", 0.0);
  p.awg_red_phase_rad = c.get_double("chain.awg_red_phase_rad", 0.0);
  p.awg_blue_phase_rad = c.get_double("chain.awg_blue_phase_rad", 0.0);
  p.awg_microwave_phase_rad = c.get_double("chain.awg_microwave_phase_rad", 0.0);
  const auto pll_phases = c.get_double_list("chain.pll_phases_rad", {0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < pll_phases.size() && i < 3; ++i) {
    p.pll_phase_rad[i] = pll_phases[i];
  }
  return out;
}

namespace {

nlohmann::ordered_json tone_json(const Tone& t) {
  return {{"frequency_hz", t.frequency_hz}, {"phase_rad", t.phase_rad}};
}

struct KindJson {
  nlohmann::ordered_json operator()(const Oscillator& o) const {
    return {{"kind", "oscillator"}, {"frequency_hz", o.frequency_hz}, {"phase_rad", o.phase_rad}};
  }
  nlohmann::ordered_json operator()(const CombSource& c) const {
    return {{"kind", "comb"},
            {"rep_rate_hz", c.rep_rate_hz},
            {"tooth_min", c.tooth_min},
            {"tooth_max", c.tooth_max},
            {"drift_samples", c.drift.times_s().size()}};
  }
  nlohmann::ordered_json operator()(const Mixer& m) const {
    return {{"kind", "mixer"},
            {"mode", m.mode == Mixer::Mode::kSum ? "sum" : "difference"},
            {"pass_lo_hz", m.pass_lo_hz},
            {"pass_hi_hz", m.pass_hi_hz}};
  }
  nlohmann::ordered_json operator()(const Pll& p) const {
    return {{"kind", "pll"},
            {"target_hz", p.target_hz},
            {"lock_sign", p.lock_sign},
            {"feed_forward", p.feed_forward}};
  }
  nlohmann::ordered_json operator()(const Awg& a) const {
    nlohmann::ordered_json tones = nlohmann::ordered_json::array();
    for (const auto& t : a.tones) tones.push_back(tone_json(t));
    return {{"kind", "awg"}, {"tones", tones}};
  }
  nlohmann::ordered_json operator()(const Aom& a) const {
    return {{"kind", "aom"},
            {"center_hz", a.center_hz},
            {"bandwidth_hz", a.bandwidth_hz},
            {"diffraction_sign", a.diffraction_sign}};
  }
  nlohmann::ordered_json operator()(const Switch& s) const {
    return {{"kind", "switch"}, {"position", s.position}};
  }
};

}  // namespace

nlohmann::ordered_json to_json(const chain::ChainGraph& g) {
  nlohmann::ordered_json j;
  j["preset"] = g.preset_id ? *g.preset_id : "";
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes()) {
    auto kj = std::visit(KindJson{}, n.kind);
    kj["name"] = n.name;
    j["nodes"].push_back(kj);
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"from_port", e.from_port}, {"to_port", e.to_port}});
  }
  return j;
}

}  // namespace ionphase::chain_presets
