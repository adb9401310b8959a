#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ionphase/tone.hpp"

namespace ionphase::chain {

/// Fixed-frequency source (the master oscillator, or any free-running
/// synthesizer such as the AOM A drive).
struct Oscillator {
  double frequency_hz = 0.0;
  double phase_rad = 0.0;
};

/// Frequency comb from a mode-locked laser / fast photodiode.  Tooth k sits
/// at k*(rep + drift(t)) relative to the reference tooth and carries the
/// accumulated drift phase 2*pi*k*Int[drift] plus a static offset.  The same
/// node models both the optical comb and the photodiode RF comb, which share
/// tooth spacing by construction.
struct CombSource {
  double rep_rate_hz = 80.57e6;
  DriftProfile drift;
  int tooth_min = 0;
  int tooth_max = 200;
  double static_phase_rad = 0.0;
};

/// Ideal mixer followed by the implied selection filter: emits only sums or
/// only differences, restricted to [pass_lo, pass_hi].  Differences are
/// normalized to positive frequency (phase sign flips with the order).
struct Mixer {
  enum class Mode { kSum, kDifference };
  Mode mode = Mode::kDifference;
  double pass_lo_hz = 0.0;
  double pass_hi_hz = 0.0;
};

/// Ideal phase-locked loop: re-emits the input beat-note closest to
/// `target_hz` (frequency and phase).  `lock_sign` records whether the
/// locked beat is comb-minus-oscillator (+1) or oscillator-minus-comb (-1).
/// With `feed_forward` off the loop is replaced by a fixed source at
/// `nominal_hz`, which is how drift sensitivity is probed.  `extra_phase_rad`
/// is the additive phase-noise hook; it defaults to off (0).
struct Pll {
  double target_hz = 0.0;
  int lock_sign = +1;
  double nominal_hz = 0.0;
  bool feed_forward = true;
  double extra_phase_rad = 0.0;
};

/// Arbitrary waveform generator channel: plays the programmed tone list.
struct Awg {
  std::vector<Tone> tones;
};

/// Acousto-optic modulator.  Takes exactly one optical input (a comb or
/// another AOM) plus RF drive tones (static `drive` list and/or tones
/// arriving on RF edges).  Each drive within the transducer band
/// [center - bw/2, center + bw/2] produces a diffracted copy of every
/// optical tone, shifted by sign * drive (frequency and phase).  Out-of-band
/// RF arriving by edge is simply not diffracted.
struct Aom {
  double center_hz = 165e6;
  double bandwidth_hz = 30e6;
  int diffraction_sign = +1;
  std::vector<Tone> drive;
};

/// RF routing switch.  As a demux, outgoing edges carry `from_port` labels
/// and only the edge matching `position` is live; as a mux, incoming edges
/// carry `to_port` labels and only matching inputs pass.  Port 0 means
/// "always connected".
struct Switch {
  int position = 1;
};

using NodeKind = std::variant<Oscillator, CombSource, Mixer, Pll, Awg, Aom, Switch>;

struct Node {
  std::string name;
  NodeKind kind;
};

struct Edge {
  std::string from;
  std::string to;
  int from_port = 0;
  int to_port = 0;
};

enum class Transition {
  kCarrierCopropagating,
  kRedSideband,
  kBlueSideband,
  kMicrowave,
};

std::string to_string(Transition t);

/// Everything effective_drive needs to locate the designated beams of a
/// preset: tooth indices, nominal AOM drive frequencies, node names and the
/// switch/waveform program per operation.
struct OperationProfile {
  int switch_a = 0;
  int switch_b = 0;
  std::vector<Tone> awg_tones;
};

struct PresetInfo {
  std::string preset_id;
  double qubit_hz = 0.0;
  double mode_hz = 0.0;
  double detuning_hz = 0.0;
  double master_hz = 0.0;
  double rep_rate_hz = 0.0;

  int red_tooth = 0;
  int blue_tooth = 0;
  int coprop_tooth = 0;
  int aom_a_sign = +1;  // planner sign convention; AOM A diffracts with its negative
  double aom_a_hz = 0.0;
  double red_drive_hz = 0.0;
  double blue_drive_hz = 0.0;
  double coprop_drive1_hz = 0.0;
  double coprop_drive2_hz = 0.0;

  std::string aom_a_node = "aom_a";
  std::string aom_b_node = "aom_b";
  std::string microwave_mixer_node = "microwave_mixer";
  std::string switch_a_node = "route_select";
  std::string switch_b_node = "aom_b_select";

  OperationProfile gate;
  OperationProfile microwave;
  OperationProfile copropagating;
};

/// Directed acyclic signal-chain graph.  Immutable once built; the with_*
/// helpers return modified copies, and all evaluation entry points are
/// const and side-effect-free, so a graph can be shared across threads.
class ChainGraph {
 public:
  void add_node(Node node);
  void add_edge(Edge edge);

  const Node& node(const std::string& name) const;
  Node& mutable_node(const std::string& name);
  bool has_node(const std::string& name) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<std::string> preset_id;
  const std::optional<PresetInfo>& preset_info() const { return info_; }
  void set_preset_info(PresetInfo info);

  /// Structural checks: unique names, known endpoints, acyclicity, mixers
  /// with exactly two inputs, PLLs with exactly one, AOMs with exactly one
  /// optical input, static AOM drives inside the transducer band.
  void validate() const;

  /// Evaluation order (topological); cached at first use of evaluate().
  std::vector<std::size_t> topo_order() const;

  ChainGraph with_switch_position(const std::string& name, int position) const;
  ChainGraph with_feed_forward(bool enabled) const;
  ChainGraph with_drift_bias(double bias_hz) const;
  ChainGraph with_awg_tones(const std::string& name, std::vector<Tone> tones) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::map<std::string, std::size_t> index_;
  std::optional<PresetInfo> info_;
};

/// Tooth evaluation used by the comb node; exposed because the comb is also
/// queried directly (e.g. by tests and the verification tool).
/// Throws std::out_of_range when k is outside the tooth range.
Tone comb_tooth(const CombSource& comb, int k, double t_s);

/// One evaluated spectral component with its provenance through an AOM.
struct LabeledTone {
  Tone tone;
  int tooth = kNoTooth;
  bool has_drive = false;
  Tone drive;

  static constexpr int kNoTooth = -1000000;
};

using Evaluation = std::map<std::string, std::vector<LabeledTone>>;

/// Full topological evaluation at time t; keeps tooth/drive labels.
Evaluation evaluate(const ChainGraph& g, double t_s);

/// Spec surface: node name -> plain tone list.
std::map<std::string, std::vector<Tone>> propagate(const ChainGraph& g, double t_s);

/// The beat-note (frequency, accumulated phase) seen by the ion for the
/// requested transition.  Requires a preset-built graph configured for that
/// transition (see configure_for); wrong switch positions raise
/// ConfigurationError.
Tone effective_drive(const ChainGraph& g, double t_s, Transition transition);

/// d(beat frequency)/d(drift) by symmetric finite perturbation of the
/// repetition-rate offset.  Ideal feed-forward returns 0; with the PLLs
/// bypassed it returns the tooth index feeding that transition.
double drift_sensitivity(const ChainGraph& g, Transition transition, double t_s = 0.0,
                         double probe_hz = 100.0);

}  // namespace ionphase::chain
