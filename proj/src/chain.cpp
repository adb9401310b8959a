#include "ionphase/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "ionphase/errors.hpp"

namespace ionphase::chain {

std::string to_string(Transition t) {
  switch (t) {
    case Transition::kCarrierCopropagating: return "carrier_copropagating";
    case Transition::kRedSideband: return "red_sideband";
    case Transition::kBlueSideband: return "blue_sideband";
    case Transition::kMicrowave: return "microwave";
  }
  return "?";
}

void ChainGraph::add_node(Node node) {
  if (index_.count(node.name)) {
    throw ConstraintError("chain: duplicate node name '" + node.name + "'");
  }
  index_[node.name] = nodes_.size();
  nodes_.push_back(std::move(node));
}

void ChainGraph::add_edge(Edge edge) {
  if (!index_.count(edge.from)) throw ConstraintError("chain: unknown edge source '" + edge.from + "'");
  if (!index_.count(edge.to)) throw ConstraintError("chain: unknown edge target '" + edge.to + "'");
  edges_.push_back(std::move(edge));
}

const Node& ChainGraph::node(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConstraintError("chain: no node named '" + name + "'");
  return nodes_[it->second];
}

Node& ChainGraph::mutable_node(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConstraintError("chain: no node named '" + name + "'");
  return nodes_[it->second];
}

bool ChainGraph::has_node(const std::string& name) const { return index_.count(name) > 0; }

void ChainGraph::set_preset_info(PresetInfo info) { info_ = std::move(info); }

std::vector<std::size_t> ChainGraph::topo_order() const {
  std::vector<std::size_t> indeg(nodes_.size(), 0);
  std::vector<std::vector<std::size_t>> adj(nodes_.size());
  for (const auto& e : edges_) {
    std::size_t a = index_.at(e.from);
    std::size_t b = index_.at(e.to);
    adj[a].push_back(b);
    ++indeg[b];
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (indeg[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  order.reserve(nodes_.size());
  while (!ready.empty()) {
    std::size_t i = ready.front();
    ready.pop_front();
    order.push_back(i);
    for (std::size_t j : adj[i]) {
      if (--indeg[j] == 0) ready.push_back(j);
    }
  }
  if (order.size() != nodes_.size()) {
    throw ConstraintError("chain: graph contains a cycle");
  }
  return order;
}

namespace {

bool is_optical_source(const NodeKind& k) {
  return std::holds_alternative<CombSource>(k) || std::holds_alternative<Aom>(k);
}

/// Whether an edge carries signal given the positions of any switch at
/// either end.  Port 0 is hard-wired.
bool edge_active(const ChainGraph& g, const Edge& e) {
  if (const auto* sw = std::get_if<Switch>(&g.node(e.from).kind)) {
    if (e.from_port != 0 && e.from_port != sw->position) return false;
  }
  if (const auto* sw = std::get_if<Switch>(&g.node(e.to).kind)) {
    if (e.to_port != 0 && e.to_port != sw->position) return false;
  }
  return true;
}

}  // namespace

void ChainGraph::validate() const {
  topo_order();  // throws on cycles / unknown endpoints
  for (const auto& n : nodes_) {
    std::size_t in_count = 0;
    std::size_t optical = 0;
    for (const auto& e : edges_) {
      if (e.to != n.name) continue;
      ++in_count;
      if (is_optical_source(node(e.from).kind)) ++optical;
    }
    if (std::holds_alternative<Mixer>(n.kind) && in_count != 2) {
      throw ConstraintError("chain: mixer '" + n.name + "' must have exactly two inputs");
    }
    if (std::holds_alternative<Pll>(n.kind) && in_count != 1) {
      throw ConstraintError("chain: PLL '" + n.name + "' must have exactly one input");
    }
    if (const auto* aom = std::get_if<Aom>(&n.kind)) {
      if (optical != 1) {
        throw ConstraintError("chain: AOM '" + n.name + "' needs exactly one optical input");
      }
      const double lo = aom->center_hz - 0.5 * aom->bandwidth_hz;
      const double hi = aom->center_hz + 0.5 * aom->bandwidth_hz;
      for (const auto& d : aom->drive) {
        if (!d.valid() || d.frequency_hz < lo || d.frequency_hz > hi) {
          throw ConstraintError("chain: AOM '" + n.name + "' static drive tone outside its band");
        }
      }
    }
    if (const auto* pll = std::get_if<Pll>(&n.kind)) {
      if (pll->lock_sign != 1 && pll->lock_sign != -1) {
        throw ConstraintError("chain: PLL '" + n.name + "' lock sign must be +1 or -1");
      }
    }
  }
}

ChainGraph ChainGraph::with_switch_position(const std::string& name, int position) const {
  ChainGraph g = *this;
  auto& n = g.mutable_node(name);
  auto* sw = std::get_if<Switch>(&n.kind);
  if (!sw) throw ConstraintError("chain: node '" + name + "' is not a switch");
  sw->position = position;
  return g;
}

ChainGraph ChainGraph::with_feed_forward(bool enabled) const {
  ChainGraph g = *this;
  for (auto& n : g.nodes_) {
    if (auto* pll = std::get_if<Pll>(&n.kind)) pll->feed_forward = enabled;
  }
  return g;
}

ChainGraph ChainGraph::with_drift_bias(double bias_hz) const {
  ChainGraph g = *this;
  for (auto& n : g.nodes_) {
    if (auto* comb = std::get_if<CombSource>(&n.kind)) comb->drift = comb->drift.with_bias(bias_hz);
  }
  return g;
}

ChainGraph ChainGraph::with_awg_tones(const std::string& name, std::vector<Tone> tones) const {
  ChainGraph g = *this;
  auto& n = g.mutable_node(name);
  auto* awg = std::get_if<Awg>(&n.kind);
  if (!awg) throw ConstraintError("chain: node '" + name + "' is not an AWG");
  awg->tones = std::move(tones);
  return g;
}

Tone comb_tooth(const CombSource& comb, int k, double t_s) {
  if (k < comb.tooth_min || k > comb.tooth_max) {
    throw std::out_of_range("comb tooth " + std::to_string(k) + " outside range [" +
                            std::to_string(comb.tooth_min) + ", " + std::to_string(comb.tooth_max) + "]");
  }
  Tone t;
  t.frequency_hz = k * (comb.rep_rate_hz + comb.drift.value(t_s));
  t.phase_rad = kTwoPi * k * comb.drift.integral(t_s) + comb.static_phase_rad;
  return t;
}

namespace {

std::vector<LabeledTone> eval_node(const Node& n,
                                   const std::vector<std::vector<LabeledTone>>& inputs,
                                   const std::vector<const Node*>& input_nodes, double t_s) {
  std::vector<LabeledTone> out;

  if (const auto* osc = std::get_if<Oscillator>(&n.kind)) {
    out.push_back({Tone{osc->frequency_hz, osc->phase_rad}, LabeledTone::kNoTooth, false, {}});
    return out;
  }

  if (const auto* comb = std::get_if<CombSource>(&n.kind)) {
    out.reserve(static_cast<std::size_t>(comb->tooth_max - comb->tooth_min + 1));
    for (int k = comb->tooth_min; k <= comb->tooth_max; ++k) {
      out.push_back({comb_tooth(*comb, k, t_s), k, false, {}});
    }
    return out;
  }

  if (const auto* mix = std::get_if<Mixer>(&n.kind)) {
    if (inputs.size() != 2) throw ConstraintError("chain: mixer '" + n.name + "' needs two inputs");
    const auto& a = inputs[0];
    const auto& b = inputs[1];
    if (a.empty() || b.empty()) return out;  // a dead arm, not a filtering failure
    bool had_products = false;
    for (const auto& x : a) {
      for (const auto& y : b) {
        had_products = true;
        Tone t;
        if (mix->mode == Mixer::Mode::kSum) {
          t.frequency_hz = x.tone.frequency_hz + y.tone.frequency_hz;
          t.phase_rad = x.tone.phase_rad + y.tone.phase_rad;
        } else {
          const double d = x.tone.frequency_hz - y.tone.frequency_hz;
          if (d >= 0.0) {
            t = Tone{d, x.tone.phase_rad - y.tone.phase_rad};
          } else {
            t = Tone{-d, y.tone.phase_rad - x.tone.phase_rad};
          }
        }
        if (t.frequency_hz < mix->pass_lo_hz || t.frequency_hz > mix->pass_hi_hz) continue;
        int tooth = LabeledTone::kNoTooth;
        if (x.tooth != LabeledTone::kNoTooth && y.tooth == LabeledTone::kNoTooth) tooth = x.tooth;
        if (y.tooth != LabeledTone::kNoTooth && x.tooth == LabeledTone::kNoTooth) tooth = y.tooth;
        out.push_back({t, tooth, false, {}});
      }
    }
    if (had_products && out.empty()) {
      throw EvaluationError("chain: passband of mixer '" + n.name + "' removed every tone");
    }
    return out;
  }

  if (const auto* pll = std::get_if<Pll>(&n.kind)) {
    if (!pll->feed_forward) {
      out.push_back({Tone{pll->nominal_hz, pll->extra_phase_rad}, LabeledTone::kNoTooth, false, {}});
      return out;
    }
    if (inputs.size() != 1 || inputs[0].empty()) {
      throw EvaluationError("chain: PLL '" + n.name + "' has no beat-note to lock to");
    }
    const LabeledTone* best = nullptr;
    double best_dist = 0.0;
    for (const auto& x : inputs[0]) {
      const double d = std::abs(x.tone.frequency_hz - pll->target_hz);
      if (!best || d < best_dist) {
        best = &x;
        best_dist = d;
      }
    }
    out.push_back({Tone{best->tone.frequency_hz, best->tone.phase_rad + pll->extra_phase_rad},
                   best->tooth, false, {}});
    return out;
  }

  if (const auto* awg = std::get_if<Awg>(&n.kind)) {
    for (const auto& t : awg->tones) out.push_back({t, LabeledTone::kNoTooth, false, {}});
    return out;
  }

  if (const auto* aom = std::get_if<Aom>(&n.kind)) {
    const double lo = aom->center_hz - 0.5 * aom->bandwidth_hz;
    const double hi = aom->center_hz + 0.5 * aom->bandwidth_hz;
    std::vector<LabeledTone> optical;
    std::vector<Tone> drives(aom->drive.begin(), aom->drive.end());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (is_optical_source(input_nodes[i]->kind)) {
        optical.insert(optical.end(), inputs[i].begin(), inputs[i].end());
      } else {
        for (const auto& x : inputs[i]) {
          // Transducer response: RF outside the band simply does not diffract.
          if (x.tone.frequency_hz >= lo && x.tone.frequency_hz <= hi) drives.push_back(x.tone);
        }
      }
    }
    const double s = aom->diffraction_sign;
    for (const auto& o : optical) {
      for (const auto& d : drives) {
        Tone t{o.tone.frequency_hz + s * d.frequency_hz, o.tone.phase_rad + s * d.phase_rad};
        out.push_back({t, o.tooth, true, d});
      }
    }
    return out;
  }

  if (std::get_if<Switch>(&n.kind)) {
    for (const auto& in : inputs) out.insert(out.end(), in.begin(), in.end());
    return out;
  }

  throw ConstraintError("chain: node '" + n.name + "' has unknown kind");
}

}  // namespace

Evaluation evaluate(const ChainGraph& g, double t_s) {
  const auto order = g.topo_order();
  Evaluation result;
  for (std::size_t idx : order) {
    const Node& n = g.nodes()[idx];
    std::vector<std::vector<LabeledTone>> inputs;
    std::vector<const Node*> input_nodes;
    for (const auto& e : g.edges()) {
      if (e.to != n.name) continue;
      input_nodes.push_back(&g.node(e.from));
      if (edge_active(g, e)) {
        inputs.push_back(result.at(e.from));
      } else {
        inputs.push_back({});
      }
    }
    result[n.name] = eval_node(n, inputs, input_nodes, t_s);
  }
  return result;
}

std::map<std::string, std::vector<Tone>> propagate(const ChainGraph& g, double t_s) {
  auto ev = evaluate(g, t_s);
  std::map<std::string, std::vector<Tone>> out;
  for (const auto& [name, tones] : ev) {
    auto& v = out[name];
    v.reserve(tones.size());
    for (const auto& lt : tones) v.push_back(lt.tone);
  }
  return out;
}

namespace {

int switch_position(const ChainGraph& g, const std::string& name) {
  const auto* sw = std::get_if<Switch>(&g.node(name).kind);
  if (!sw) throw ConstraintError("chain: node '" + name + "' is not a switch");
  return sw->position;
}

void require_positions(const ChainGraph& g, const PresetInfo& info, const OperationProfile& p,
                       Transition t, bool check_b) {
  const int a = switch_position(g, info.switch_a_node);
  if (a != p.switch_a) {
    throw ConfigurationError("chain is not configured for " + to_string(t) + ": switch '" +
                             info.switch_a_node + "' at position " + std::to_string(a) +
                             ", expected " + std::to_string(p.switch_a));
  }
  if (check_b) {
    const int b = switch_position(g, info.switch_b_node);
    if (b != p.switch_b) {
      throw ConfigurationError("chain is not configured for " + to_string(t) + ": switch '" +
                               info.switch_b_node + "' at position " + std::to_string(b) +
                               ", expected " + std::to_string(p.switch_b));
    }
  }
}

const LabeledTone& find_beam(const Evaluation& ev, const std::string& node, int tooth,
                             const double* drive_nominal_hz) {
  auto it = ev.find(node);
  if (it == ev.end()) throw EvaluationError("chain: no evaluation for node '" + node + "'");
  const LabeledTone* best = nullptr;
  double best_dist = 0.0;
  for (const auto& lt : it->second) {
    if (lt.tooth != tooth) continue;
    if (drive_nominal_hz) {
      if (!lt.has_drive) continue;
      const double d = std::abs(lt.drive.frequency_hz - *drive_nominal_hz);
      if (d > 3e6) continue;  // drives are separated by several MHz by design
      if (!best || d < best_dist) {
        best = &lt;
        best_dist = d;
      }
    } else {
      best = &lt;
      break;
    }
  }
  if (!best) {
    throw EvaluationError("chain: node '" + node + "' produced no beam at tooth " +
                          std::to_string(tooth));
  }
  return *best;
}

}  // namespace

Tone effective_drive(const ChainGraph& g, double t_s, Transition transition) {
  const auto& info_opt = g.preset_info();
  if (!info_opt) {
    throw ConfigurationError("effective_drive requires a preset-built chain");
  }
  const PresetInfo& info = *info_opt;

  switch (transition) {
    case Transition::kMicrowave: {
      require_positions(g, info, info.microwave, transition, /*check_b=*/false);
      auto ev = evaluate(g, t_s);
      auto it = ev.find(info.microwave_mixer_node);
      if (it == ev.end() || it->second.empty()) {
        throw EvaluationError("chain: microwave mixer produced no output");
      }
      const LabeledTone* best = nullptr;
      double best_dist = 0.0;
      for (const auto& lt : it->second) {
        const double d = std::abs(lt.tone.frequency_hz - info.qubit_hz);
        if (!best || d < best_dist) {
          best = &lt;
          best_dist = d;
        }
      }
      return best->tone;
    }
    case Transition::kRedSideband:
    case Transition::kBlueSideband: {
      require_positions(g, info, info.gate, transition, /*check_b=*/true);
      auto ev = evaluate(g, t_s);
      if (transition == Transition::kRedSideband) {
        // Absorb from the red tooth of the AOM A beam, emit into the
        // reference tooth of the red-driven AOM B beam.
        const auto& a = find_beam(ev, info.aom_a_node, info.red_tooth, nullptr);
        const auto& b = find_beam(ev, info.aom_b_node, 0, &info.red_drive_hz);
        return Tone{a.tone.frequency_hz - b.tone.frequency_hz, a.tone.phase_rad - b.tone.phase_rad};
      }
      // Blue: absorb from the blue tooth of the AOM B beam, emit into the
      // reference tooth of the AOM A beam.
      const auto& b = find_beam(ev, info.aom_b_node, info.blue_tooth, &info.blue_drive_hz);
      const auto& a = find_beam(ev, info.aom_a_node, 0, nullptr);
      return Tone{b.tone.frequency_hz - a.tone.frequency_hz, b.tone.phase_rad - a.tone.phase_rad};
    }
    case Transition::kCarrierCopropagating: {
      require_positions(g, info, info.copropagating, transition, /*check_b=*/true);
      if (info.coprop_tooth == 0) {
        throw ConfigurationError("chain preset was built without a copropagating plan");
      }
      auto ev = evaluate(g, t_s);
      const auto& b1 = find_beam(ev, info.aom_b_node, info.coprop_tooth, &info.coprop_drive1_hz);
      const auto& b2 = find_beam(ev, info.aom_b_node, 0, &info.coprop_drive2_hz);
      return Tone{b1.tone.frequency_hz - b2.tone.frequency_hz,
                  b1.tone.phase_rad - b2.tone.phase_rad};
    }
  }
  throw ConfigurationError("effective_drive: unknown transition");
}

double drift_sensitivity(const ChainGraph& g, Transition transition, double t_s, double probe_hz) {
  const Tone hi = effective_drive(g.with_drift_bias(+probe_hz), t_s, transition);
  const Tone lo = effective_drive(g.with_drift_bias(-probe_hz), t_s, transition);
  return (hi.frequency_hz - lo.frequency_hz) / (2.0 * probe_hz);
}

}  // namespace ionphase::chain
