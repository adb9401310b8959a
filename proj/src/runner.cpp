#include "ionphase/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>

#include "ionphase/errors.hpp"
#include "ionphase/rng.hpp"

namespace ionphase::experiments {

namespace {

using qubits::BeamGeometry;
using qubits::Geometry;
using qubits::NoiseState;
using qubits::RfPhases;
using qubits::TwoQubitState;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHalfPi = 0.5 * kPi;

// Substream tags; point index is the third key.
enum Stream : std::uint64_t {
  kPointStream = 1,
  kPathStream = 2,
  kChiStream = 3,
  kDriftStream = 4,
};

struct ShotStats {
  double mean = 0.0;
  double std_error = 0.0;
};

ShotStats finalize(double sum, double sumsq, int n) {
  const double mean = sum / n;
  double var = 0.0;
  if (n > 1) var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1));
  return {mean, std::sqrt(var / n)};
}

void require_sweep(const ScenarioConfig& cfg, const char* expected) {
  if (cfg.sweep.name != expected) {
    throw ConfigError("scenario '" + to_string(cfg.id) + "' expects sweep '" + expected +
                      "', got '" + cfg.sweep.name + "'");
  }
}

template <typename Fn>
std::vector<RunPoint> run_points(int n, Exec exec, Fn&& fn) {
  std::vector<RunPoint> out(static_cast<std::size_t>(n));
#ifdef _OPENMP
  if (exec == Exec::kParallel) {
    std::exception_ptr eptr = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
#pragma omp critical
        {
          if (!eptr) eptr = std::current_exception();
        }
      }
    }
    if (eptr) std::rethrow_exception(eptr);
    return out;
  }
#endif
  (void)exec;
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
  return out;
}

/// Wiener path-length drift sampled at the sweep points (prefix sums drawn
/// serially so points stay order-independent).
std::vector<double> path_walk(const ScenarioConfig& cfg, const std::vector<double>& dt_s) {
  std::vector<double> dx(dt_s.size(), 0.0);
  if (cfg.noise.path_step_m_per_sqrt_s <= 0.0) return dx;
  Rng rng = Rng::substream(cfg.seed, kPathStream, 0);
  double x = 0.0;
  for (std::size_t i = 0; i < dt_s.size(); ++i) {
    x += cfg.noise.path_step_m_per_sqrt_s * std::sqrt(std::max(dt_s[i], 0.0)) * rng.normal();
    dx[i] = x;
  }
  return dx;
}

std::array<double, 4> probabilities(const TwoQubitState& s) {
  return {s.probability(0), s.probability(1), s.probability(2), s.probability(3)};
}

/// Analysis rotation + measurement of the parity observable.
///
/// The state after the gate carries `fringe_contrast` c; measurement samples
/// the classical mixture c * |psi><psi| + (1-c) * (even-population mixture),
/// whose analyzed populations are uniform under pi/2 analysis pulses.
/// Detection error flips each qubit's readout independently, scaling the
/// expected parity by (1-2d)^2.
ShotStats measure_parity(const TwoQubitState& after_gate, double analysis_phase_rad,
                         double detection, bool exact, int shots, Rng& rng) {
  const double c = after_gate.fringe_contrast;
  TwoQubitState pure = after_gate;
  pure.fringe_contrast = 1.0;
  pure = qubits::rotate(qubits::rotate(pure, 1, kHalfPi, analysis_phase_rad), 2, kHalfPi,
                        analysis_phase_rad);
  const auto p_pure = probabilities(pure);

  std::array<double, 4> p_mixed{};
  for (int b : {0, 3}) {
    TwoQubitState branch = TwoQubitState::basis(b);
    branch = qubits::rotate(qubits::rotate(branch, 1, kHalfPi, analysis_phase_rad), 2, kHalfPi,
                            analysis_phase_rad);
    const auto pb = probabilities(branch);
    for (std::size_t i = 0; i < 4; ++i) p_mixed[i] += 0.5 * pb[i];
  }

  std::array<double, 4> p{};
  for (std::size_t i = 0; i < 4; ++i) p[i] = c * p_pure[i] + (1.0 - c) * p_mixed[i];

  if (exact) {
    const double flip = (1.0 - 2.0 * detection) * (1.0 - 2.0 * detection);
    return {flip * (p[0] - p[1] - p[2] + p[3]), 0.0};
  }

  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < shots; ++s) {
    const double u = rng.uniform01();
    int idx = 3;
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      acc += p[static_cast<std::size_t>(i)];
      if (u < acc) {
        idx = i;
        break;
      }
    }
    int q1 = idx >> 1, q2 = idx & 1;
    if (detection > 0.0) {
      if (rng.bernoulli(detection)) q1 ^= 1;
      if (rng.bernoulli(detection)) q2 ^= 1;
    }
    const double par = (q1 == q2) ? 1.0 : -1.0;
    sum += par;
    sumsq += 1.0;
  }
  return finalize(sum, sumsq, shots);
}

double analysis_pulse_offset(const ScenarioConfig& cfg) {
  // phi_prime is specified at the parity-fringe level, where analysis pulse
  // phases enter doubled; Raman-referenced analysis carries the offset.
  return cfg.analysis_source == AnalysisSource::kRaman ? 0.5 * cfg.phi_prime_rad : 0.0;
}

/// Inner analysis-phase scan and sinusoid fit; returns the fitted fringe
/// phase.  Used by the phase-monitoring scenarios.
struct PhaseFitPoint {
  double phase_rad = 0.0;
  double phase_se = 0.0;
  double amplitude = 0.0;
};

PhaseFitPoint fit_parity_phase(const ScenarioConfig& cfg, const TwoQubitState& after_gate,
                               Rng& rng) {
  const int n = cfg.analysis_points;
  const int shots = cfg.analysis_shots > 0 ? cfg.analysis_shots : cfg.shots;
  const double offset = analysis_pulse_offset(cfg);
  std::vector<double> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double phi = kTwoPi * j / n;
    xs[static_cast<std::size_t>(j)] = phi;
    ys[static_cast<std::size_t>(j)] =
        measure_parity(after_gate, phi + offset, cfg.noise.detection_error, cfg.exact, shots, rng)
            .mean;
  }
  const SinusoidFit fit = fit_sinusoid(xs, ys, 2.0);
  PhaseFitPoint out;
  out.phase_rad = fit.phase_rad;
  out.amplitude = fit.amplitude;
  out.phase_se =
      fit.residual_rms * std::sqrt(2.0 / n) / std::max(fit.amplitude, 1e-9);
  return out;
}

std::vector<double> constant_dts(const ScenarioConfig& cfg, std::size_t n) {
  return std::vector<double>(n, cfg.point_duration_s);
}

}  // namespace

RunResult run_parity_scan(const ScenarioConfig& cfg, Exec exec) {
  require_sweep(cfg, "analysis_phase_rad");
  const auto xs = cfg.sweep.values();
  const auto dx = path_walk(cfg, constant_dts(cfg, xs.size()));
  const double offset = analysis_pulse_offset(cfg);

  RunResult r;
  r.scenario = to_string(cfg.id);
  r.seed = cfg.seed;
  r.sweep_name = cfg.sweep.name;
  r.observable_name = "parity";
  if (cfg.record_noise) r.aux_names = {"path_drift_m"};

  r.points = run_points(cfg.sweep.points, exec, [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    Rng rng = Rng::substream(cfg.seed, kPointStream, k);
    const NoiseState noise{dx[k], 0.0};
    const double phi_g = qubits::sideband_phases(cfg.geometry, RfPhases{}, noise).gate_rad;
    const TwoQubitState st = qubits::ms_gate(TwoQubitState{}, phi_g, cfg.noise.parity_contrast);
    const auto stats = measure_parity(st, xs[k] + offset, cfg.noise.detection_error, cfg.exact,
                                      cfg.shots, rng);
    RunPoint p{xs[k], stats.mean, stats.std_error, {}};
    if (cfg.record_noise) p.aux = {dx[k]};
    return p;
  });
  return r;
}

RunResult run_sideband_shift(const ScenarioConfig& cfg, Exec exec) {
  require_sweep(cfg, "sideband_phase_rad");
  const auto xs = cfg.sweep.values();

  RunResult r;
  r.scenario = to_string(cfg.id);
  r.seed = cfg.seed;
  r.sweep_name = cfg.sweep.name;
  r.observable_name = "parity_fringe_phase_rad";
  r.aux_names = {"fringe_amplitude"};

  r.points = run_points(cfg.sweep.points, exec, [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    Rng rng = Rng::substream(cfg.seed, kPointStream, k);
    RfPhases rf;
    if (cfg.sideband == SidebandChoice::kRed || cfg.sideband == SidebandChoice::kBoth) {
      rf.red_rad += xs[k];
    }
    if (cfg.sideband == SidebandChoice::kBlue || cfg.sideband == SidebandChoice::kBoth) {
      rf.blue_rad += xs[k];
    }
    const double phi_g = qubits::gate_phase_from_rf(cfg.geometry, rf);
    const TwoQubitState st = qubits::ms_gate(TwoQubitState{}, phi_g, cfg.noise.parity_contrast);
    const PhaseFitPoint fit = fit_parity_phase(cfg, st, rng);
    return RunPoint{xs[k], fit.phase_rad, fit.phase_se, {fit.amplitude}};
  });
  return r;
}

RunResult run_random_phase(const ScenarioConfig& cfg, Exec exec) {
  require_sweep(cfg, "analysis_phase_rad");
  const auto xs = cfg.sweep.values();
  const double offset = analysis_pulse_offset(cfg);
  const bool per_point =
      cfg.random_phase_redraw == RedrawMode::kPerPoint || cfg.random_phase_constant_rad;

  // Per-point draws come from their own stream so they are auditable.
  std::vector<double> chi(xs.size(), 0.0);
  if (per_point) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      chi[i] = cfg.random_phase_constant_rad
                   ? *cfg.random_phase_constant_rad
                   : Rng::substream(cfg.seed, kChiStream, i).uniform(0.0, kTwoPi);
    }
  }

  RunResult r;
  r.scenario = to_string(cfg.id);
  r.seed = cfg.seed;
  r.sweep_name = cfg.sweep.name;
  r.observable_name = "parity";
  if (cfg.record_noise && per_point) r.aux_names = {"random_phase_rad"};

  r.points = run_points(cfg.sweep.points, exec, [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    Rng rng = Rng::substream(cfg.seed, kPointStream, k);
    const auto gated_state = [&](double chi_rad) {
      RfPhases rf;
      rf.red_rad = chi_rad;
      rf.blue_rad = chi_rad;
      const double phi_g = qubits::gate_phase_from_rf(cfg.geometry, rf);
      return qubits::ms_gate(TwoQubitState{}, phi_g, cfg.noise.parity_contrast);
    };

    RunPoint p;
    p.x = xs[k];
    if (per_point) {
      const auto stats = measure_parity(gated_state(chi[k]), xs[k] + offset,
                                        cfg.noise.detection_error, cfg.exact, cfg.shots, rng);
      p.mean = stats.mean;
      p.std_error = stats.std_error;
      if (cfg.record_noise) p.aux = {chi[k]};
      return p;
    }

    // Fresh phase on both sideband tones for every gate execution.
    if (cfg.exact) {
      if (cfg.geometry.geometry == Geometry::kInsensitive) {
        const auto stats = measure_parity(gated_state(0.0), xs[k] + offset,
                                          cfg.noise.detection_error, true, cfg.shots, rng);
        p.mean = stats.mean;  // common phase cancels identically
      } else {
        p.mean = 0.0;  // uniform phase averages the fringe away
      }
      p.std_error = 0.0;
      return p;
    }
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < cfg.shots; ++s) {
      const double chi_shot = rng.uniform(0.0, kTwoPi);
      const auto one = measure_parity(gated_state(chi_shot), xs[k] + offset,
                                      cfg.noise.detection_error, false, 1, rng);
      sum += one.mean;
      sumsq += 1.0;
    }
    const auto stats = finalize(sum, sumsq, cfg.shots);
    p.mean = stats.mean;
    p.std_error = stats.std_error;
    return p;
  });
  return r;
}

RunResult run_ramsey(const ScenarioConfig& cfg, Exec exec) {
  const bool delay_mode = cfg.sweep.name == "delay_s";
  if (!delay_mode && cfg.sweep.name != "raman_phase_rad") {
    throw ConfigError("scenario 'ramsey' expects sweep 'delay_s' or 'raman_phase_rad', got '" +
                      cfg.sweep.name + "'");
  }
  const auto xs = cfg.sweep.values();
  const double tau = cfg.noise.dephasing_tau_s;

  RunResult r;
  r.scenario = to_string(cfg.id);
  r.seed = cfg.seed;
  r.sweep_name = cfg.sweep.name;
  r.observable_name = "p1";

  r.points = run_points(cfg.sweep.points, exec, [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    Rng rng = Rng::substream(cfg.seed, kPointStream, k);

    double phase1, phase2, delay;
    if (delay_mode) {
      // Raman pulse first, microwave pulse after the delay.
      phase1 = cfg.raman_phase_rad + cfg.phi0_rad;
      phase2 = cfg.microwave_phase_rad;
      delay = xs[k];
    } else {
      // Microwave pulse first, Raman pulse with the scanned phase.
      phase1 = cfg.microwave_phase_rad;
      phase2 = xs[k] + cfg.phi0_rad;
      delay = 0.0;
    }
    const double sigma = (tau > 0.0 && delay > 0.0) ? std::sqrt(2.0) * delay / tau : 0.0;

    RunPoint p;
    p.x = xs[k];
    if (cfg.exact) {
      const double envelope = sigma > 0.0 ? std::exp(-0.5 * sigma * sigma) : 1.0;
      const double p1 = 0.5 * (1.0 + envelope * std::cos(phase2 - phase1));
      p.mean = p1 * (1.0 - cfg.noise.detection_error) + (1.0 - p1) * cfg.noise.detection_error;
      p.std_error = 0.0;
      return p;
    }
    double sum = 0.0;
    for (int s = 0; s < cfg.shots; ++s) {
      const double eps = sigma > 0.0 ? sigma * rng.normal() : 0.0;
      TwoQubitState st;
      st = qubits::rotate(st, 1, kHalfPi, phase1);
      st = qubits::rotate(st, 1, kHalfPi, phase2 + eps);
      const double p1 = st.probability(2) + st.probability(3);
      const double seen = p1 * (1.0 - cfg.noise.detection_error) +
                          (1.0 - p1) * cfg.noise.detection_error;
      sum += rng.bernoulli(seen) ? 1.0 : 0.0;
    }
    const auto stats = finalize(sum, sum /* x^2 == x for 0/1 samples */, cfg.shots);
    p.mean = stats.mean;
    p.std_error = stats.std_error;
    return p;
  });
  return r;
}

RunResult run_stability(const ScenarioConfig& cfg, Exec exec) {
  require_sweep(cfg, "time_h");
  if (!cfg.chain) throw ConfigError("stability runs need a [chain] section");
  const auto xs = cfg.sweep.values();

  // Repetition-rate random walk, held piecewise-constant between updates.
  chain_presets::ChainConfig cc = *cfg.chain;
  if (cfg.noise.rep_walk_hz_per_sqrt_h > 0.0) {
    Rng rng = Rng::substream(cfg.seed, kDriftStream, 0);
    const double horizon_s = xs.back() * 3600.0;
    const double dt = cfg.noise.rep_walk_interval_s;
    const double step = cfg.noise.rep_walk_hz_per_sqrt_h * std::sqrt(dt / 3600.0);
    std::vector<double> times, values;
    double v = 0.0;
    for (double t = 0.0; t <= horizon_s + dt; t += dt) {
      times.push_back(t);
      values.push_back(v);
      v += step * rng.normal();
    }
    cc.params.drift = chain::DriftProfile(times, values);
  }
  chain::ChainGraph graph = chain_presets::build_preset(cc.preset, cc.params);
  if (!cfg.feed_forward) graph = graph.with_feed_forward(false);

  std::vector<double> dts(xs.size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    dts[i] = (i == 0 ? xs[0] : xs[i] - xs[i - 1]) * 3600.0;
  }
  const auto dx = path_walk(cfg, dts);

  RunResult r;
  r.scenario = to_string(cfg.id);
  r.seed = cfg.seed;
  r.sweep_name = cfg.sweep.name;
  r.observable_name = "parity_fringe_phase_rad";
  r.aux_names = {"path_drift_m", "rep_rate_drift_hz"};

  r.points = run_points(cfg.sweep.points, exec, [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    Rng rng = Rng::substream(cfg.seed, kPointStream, k);
    const double t_s = xs[k] * 3600.0;

    // Drive phases at the ion come straight from the chain; the beat phase
    // of each sideband is its transition phase, mapped onto the drive-phase
    // convention with the single-beam phase as reference.
    const chain::Tone red = chain::effective_drive(graph, t_s, chain::Transition::kRedSideband);
    const chain::Tone blue = chain::effective_drive(graph, t_s, chain::Transition::kBlueSideband);
    RfPhases rf;
    rf.aom_a_rad = 0.0;
    rf.red_rad = -red.phase_rad;
    rf.blue_rad = blue.phase_rad;

    const NoiseState noise{dx[k], 0.0};
    const double phi_g = qubits::sideband_phases(cfg.geometry, rf, noise).gate_rad;
    const TwoQubitState st = qubits::ms_gate(TwoQubitState{}, phi_g, cfg.noise.parity_contrast);
    const PhaseFitPoint fit = fit_parity_phase(cfg, st, rng);

    RunPoint p{xs[k], fit.phase_rad, fit.phase_se, {}};
    double drift_now = 0.0;
    for (const auto& n : graph.nodes()) {
      if (const auto* comb = std::get_if<chain::CombSource>(&n.kind)) {
        drift_now = comb->drift.value(t_s);
      }
    }
    p.aux = {dx[k], drift_now};
    return p;
  });
  return r;
}

RunResult run_alignment_scan(const ScenarioConfig& cfg, Exec exec) {
  require_sweep(cfg, "shuttle_um");
  const auto xs = cfg.sweep.values();

  RunResult r;
  r.scenario = to_string(cfg.id);
  r.seed = cfg.seed;
  r.sweep_name = cfg.sweep.name;
  r.observable_name = "brightness";

  // Noise-free by construction: the scan reports the closed-form signal.
  r.points = run_points(cfg.sweep.points, exec, [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double d_m = xs[k] * 1e-6;
    const double y = qubits::alignment_signal(d_m, cfg.geometry.misalignment_rad,
                                              cfg.geometry.lambda_prime_m());
    return RunPoint{xs[k], y, 0.0, {}};
  });
  return r;
}

RunResult run_scenario(const ScenarioConfig& cfg, Exec exec) {
  cfg.validate();
  switch (cfg.id) {
    case ScenarioId::kRamsey: return run_ramsey(cfg, exec);
    case ScenarioId::kParityScan: return run_parity_scan(cfg, exec);
    case ScenarioId::kSidebandShift: return run_sideband_shift(cfg, exec);
    case ScenarioId::kRandomPhase: return run_random_phase(cfg, exec);
    case ScenarioId::kStability: return run_stability(cfg, exec);
    case ScenarioId::kAlignment: return run_alignment_scan(cfg, exec);
  }
  throw ConfigError("run_scenario: unknown scenario id");
}

RunSummary summarize(const ScenarioConfig& cfg, const RunResult& result) {
  RunSummary s;
  std::vector<double> xs, ys;
  xs.reserve(result.points.size());
  ys.reserve(result.points.size());
  for (const auto& p : result.points) {
    xs.push_back(p.x);
    ys.push_back(p.mean);
  }
  char buf[256];

  switch (cfg.id) {
    case ScenarioId::kRamsey: {
      if (cfg.sweep.name == "delay_s") {
        std::vector<double> contrast(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) contrast[i] = 2.0 * ys[i] - 1.0;
        s.decay = fit_gaussian_decay(xs, contrast);
        std::snprintf(buf, sizeof buf, "gaussian decay fit: tau = %.4g s, scale = %.4g, rms = %.3g",
                      s.decay->tau_s, s.decay->scale, s.decay->residual_rms);
      } else {
        s.sinusoid = fit_sinusoid(xs, ys, 1.0);
        std::snprintf(buf, sizeof buf,
                      "fringe fit: amplitude = %.4f, phase = %.4f rad, offset = %.4f",
                      s.sinusoid->amplitude, s.sinusoid->phase_rad, s.sinusoid->offset);
      }
      break;
    }
    case ScenarioId::kParityScan:
    case ScenarioId::kRandomPhase: {
      s.sinusoid = fit_sinusoid(xs, ys, 2.0);
      std::snprintf(buf, sizeof buf,
                    "parity fit: amplitude = %.4f, phase = %.4f rad, offset = %.4f",
                    s.sinusoid->amplitude, s.sinusoid->phase_rad, s.sinusoid->offset);
      break;
    }
    case ScenarioId::kSidebandShift: {
      const auto unwrapped = unwrap_phases(ys);
      const auto line = fit_line(xs, unwrapped);
      s.slope = line.slope;
      std::snprintf(buf, sizeof buf, "fringe-phase slope = %.4f", line.slope);
      break;
    }
    case ScenarioId::kStability: {
      const auto unwrapped = unwrap_phases(ys);
      const auto [lo, hi] = std::minmax_element(unwrapped.begin(), unwrapped.end());
      s.spread_deg = (*hi - *lo) * 360.0 / kTwoPi;
      std::snprintf(buf, sizeof buf, "fringe-phase spread over %g h: %.3f deg", xs.back(),
                    *s.spread_deg);
      break;
    }
    case ScenarioId::kAlignment: {
      std::snprintf(buf, sizeof buf, "analytic alignment curve (%zu points)", xs.size());
      break;
    }
  }
  s.text = buf;
  return s;
}

ErrorBudget error_budget(double thermal_error, double detection_error) {
  if (!(thermal_error >= 0.0 && thermal_error <= 0.5) ||
      !(detection_error >= 0.0 && detection_error <= 0.5)) {
    throw std::invalid_argument("error_budget: error fractions must lie in [0, 0.5]");
  }
  ErrorBudget b;
  b.even_population = (1.0 - thermal_error) * (1.0 - detection_error);
  b.parity_amplitude = (1.0 - thermal_error) * (1.0 - detection_error);
  b.fidelity = 0.5 * b.even_population + 0.5 * b.parity_amplitude;
  return b;
}

}  // namespace ionphase::experiments
