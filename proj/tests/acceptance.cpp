// Acceptance suite: numeric end-to-end checks of the planner, the
// feed-forward chain, the phase algebra and the scenario runner, each
// printed as one PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ionphase/chain.hpp"
#include "ionphase/chain_presets.hpp"
#include "ionphase/config.hpp"
#include "ionphase/fitting.hpp"
#include "ionphase/io.hpp"
#include "ionphase/planner.hpp"
#include "ionphase/qubits.hpp"
#include "ionphase/rng.hpp"
#include "ionphase/runner.hpp"

using namespace ionphase;
using namespace ionphase::experiments;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

int g_failures = 0;

void run_criterion(int number, const std::string& name, const std::function<void()>& body) {
  const auto t0 = Clock::now();
  try {
    body();
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[PASS] %2d. %s (%.2f s)\n", number, name.c_str(), s);
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("[FAIL] %2d. %s: %s\n", number, name.c_str(), e.what());
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

planner::PlannerInput stock_input(double aom_a_mhz) {
  planner::PlannerInput in;
  in.aom_a_candidates_hz = {aom_a_mhz * 1e6};
  in.aom_a_signs = {+1, -1};
  in.tooth_min = 100;
  in.tooth_max = 200;
  return in;
}

const planner::GatePlan* find_plan(const std::vector<planner::GatePlan>& plans, int n, int m) {
  for (const auto& p : plans) {
    if (p.red_tooth == n && p.blue_tooth == m) return &p;
  }
  return nullptr;
}

double elapsed_s(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ScenarioConfig shipped(const char* file) {
  const auto c = cfg::ConfigFile::parse_file(std::string(ION_CONFIG_DIR) + "/" + file);
  return scenario_from_config(c);
}

double fitted_parity_amplitude(const ScenarioConfig& cfg) {
  const auto summary = summarize(cfg, run_scenario(cfg));
  return summary.sinusoid->amplitude;
}

}  // namespace

int main() {
  run_criterion(1, "planner reproduces the two-tooth gate plan in under a second", [] {
    const auto t0 = Clock::now();
    const auto set = planner::plan_gate(stock_input(77.5));
    const double dt = elapsed_s(t0);
    const auto* p = find_plan(set.plans, 160, 154);
    require(p != nullptr, "no plan with n=160, m=154");
    require(std::abs(p->red_drive_hz - 173.4e6) < 0.1e6,
            fmt("red drive %.4f MHz not within 0.1 MHz of 173.4", p->red_drive_hz / 1e6));
    require(std::abs(p->blue_drive_hz - 160.0e6) < 0.1e6,
            fmt("blue drive %.4f MHz not within 0.1 MHz of 160.0", p->blue_drive_hz / 1e6));
    require(dt < 1.0, fmt("search took %.3f s", dt));
  });

  run_criterion(2, "planner reproduces the single-tooth plan via the negative order", [] {
    const auto t0 = Clock::now();
    const auto set = planner::plan_gate(stock_input(160.0));
    const double dt = elapsed_s(t0);
    const auto* p = find_plan(set.plans, 157, 157);
    require(p != nullptr, "no plan with n=m=157");
    require(p->aom_a_sign == -1, "single-tooth plan does not use the negative order");
    require(std::abs(p->red_drive_hz - 169.2e6) < 0.2e6,
            fmt("red drive %.4f MHz not within 0.2 MHz of 169.2", p->red_drive_hz / 1e6));
    require(std::abs(p->blue_drive_hz - 155.7e6) < 0.2e6,
            fmt("blue drive %.4f MHz not within 0.2 MHz of 155.7", p->blue_drive_hz / 1e6));
    require(dt < 1.0, fmt("search took %.3f s", dt));
  });

  run_criterion(3, "chain drift sensitivity: zero locked, tooth index bypassed", [] {
    using chain::Transition;
    const auto g3 = chain_presets::build_preset(chain_presets::Preset::kThreePll,
                                                chain_presets::stock_params_three_pll());
    const auto g1 = chain_presets::build_preset(chain_presets::Preset::kSinglePll,
                                                chain_presets::stock_params_single_pll());
    for (const auto* g : {&g3, &g1}) {
      for (auto tr : {Transition::kRedSideband, Transition::kBlueSideband}) {
        const double s = chain::drift_sensitivity(*g, tr);
        require(std::abs(s) < 1e-6, fmt("locked sensitivity %.3e", s));
      }
    }
    const auto b3 = g3.with_feed_forward(false);
    require(std::abs(chain::drift_sensitivity(b3, Transition::kRedSideband) - 160.0) < 1e-6,
            "bypassed red sensitivity is not 160");
    require(std::abs(chain::drift_sensitivity(b3, Transition::kBlueSideband) - 154.0) < 1e-6,
            "bypassed blue sensitivity is not 154");
    const auto b1 = g1.with_feed_forward(false);
    require(std::abs(chain::drift_sensitivity(b1, Transition::kRedSideband) - 157.0) < 1e-6,
            "bypassed single-lock sensitivity is not 157");
    require(std::abs(chain::drift_sensitivity(b1, Transition::kBlueSideband) - 157.0) < 1e-6,
            "bypassed single-lock sensitivity is not 157");

    const double pll1 = std::get<chain::Pll>(g3.node("pll_red").kind).nominal_hz;
    const double pll2 = std::get<chain::Pll>(g3.node("pll_blue").kind).nominal_hz;
    require(std::abs(pll1 - 285e6) < 0.5e6, fmt("red lock beat %.3f MHz vs 285", pll1 / 1e6));
    require(std::abs(pll2 - 198e6) < 0.5e6, fmt("blue lock beat %.3f MHz vs 198", pll2 / 1e6));
  });

  run_criterion(4, "optical-phase immunity and imprinting over 1000 random triples", [] {
    Rng rng(20240401);
    qubits::BeamGeometry ins;
    ins.geometry = qubits::Geometry::kInsensitive;
    ins.ion_position_m = {-2.5e-6, 2.5e-6};
    qubits::BeamGeometry sens = ins;
    sens.geometry = qubits::Geometry::kSensitive;

    for (int k = 0; k < 1000; ++k) {
      qubits::RfPhases rf{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const double dx = rng.uniform(-5e-6, 5e-6);
      qubits::TwoQubitState input;
      double norm = 0.0;
      for (auto& a : input.amp) {
        a = std::complex<double>(rng.normal(), rng.normal());
        norm += std::norm(a);
      }
      for (auto& a : input.amp) a /= std::sqrt(norm);

      const auto out_at = [&](double path) {
        const auto set = qubits::sideband_phases(ins, rf, qubits::NoiseState{path, 0.0});
        return qubits::ms_gate(input, set.gate_rad);
      };
      const auto a = out_at(dx);
      const auto b = out_at(0.0);
      for (int i = 0; i < 4; ++i) {
        require(std::abs(a.amp[i] - b.amp[i]) < 1e-12, "insensitive amplitudes moved with dx");
      }

      const auto phase_at = [&](double path) {
        const auto set = qubits::sideband_phases(sens, rf, qubits::NoiseState{path, 0.0});
        auto s = qubits::ms_gate(qubits::TwoQubitState{}, set.gate_rad);
        const auto par = [&](double phi) {
          return qubits::parity(
              qubits::rotate(qubits::rotate(s, 1, kPi / 2, phi), 2, kPi / 2, phi));
        };
        return std::atan2(par(0.0), par(kPi / 4));
      };
      const double shift = phase_at(dx) - phase_at(0.0);
      const double expected = 2.0 * sens.delta_k_rad_per_m * dx;
      require(std::abs(wrap_phase(shift - expected)) < 1e-9,
              "sensitive parity phase did not shift by 2*dk*dx");
    }
  });

  run_criterion(5, "sideband phase slopes (-1,+1) and (+1,+1) across ten seeds", [] {
    const auto slope_of = [](qubits::Geometry g, SidebandChoice sb, std::uint64_t seed) {
      ScenarioConfig c;
      c.id = ScenarioId::kSidebandShift;
      c.sweep = {"sideband_phase_rad", 0.0, kPi, 13};
      c.shots = 300;
      c.analysis_points = 32;
      c.sideband = sb;
      c.geometry.geometry = g;
      c.seed = seed;
      const auto summary = summarize(c, run_scenario(c));
      return *summary.slope;
    };
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double a = slope_of(qubits::Geometry::kInsensitive, SidebandChoice::kRed, seed);
      require(std::abs(a + 1.0) <= 0.02, fmt("insensitive red slope %.4f (seed %.0f)", a, seed));
      const double b = slope_of(qubits::Geometry::kInsensitive, SidebandChoice::kBlue, seed);
      require(std::abs(b - 1.0) <= 0.02, fmt("insensitive blue slope %.4f (seed %.0f)", b, seed));
      const double c = slope_of(qubits::Geometry::kSensitive, SidebandChoice::kRed, seed);
      require(std::abs(c - 1.0) <= 0.02, fmt("sensitive red slope %.4f (seed %.0f)", c, seed));
      const double d = slope_of(qubits::Geometry::kSensitive, SidebandChoice::kBlue, seed);
      require(std::abs(d - 1.0) <= 0.02, fmt("sensitive blue slope %.4f (seed %.0f)", d, seed));
    }
  });

  run_criterion(6, "random-phase contrast: insensitive >= 0.95, sensitive <= 0.15, < 10 s", [] {
    const auto t0 = Clock::now();
    const double keep = fitted_parity_amplitude(shipped("random_phase_insensitive.ini"));
    const double lose = fitted_parity_amplitude(shipped("random_phase_sensitive.ini"));
    const double dt = elapsed_s(t0);
    require(keep >= 0.95, fmt("insensitive amplitude %.4f < 0.95", keep));
    require(lose <= 0.15, fmt("sensitive amplitude %.4f > 0.15", lose));
    require(dt < 10.0, fmt("runtime %.2f s", dt));
  });

  run_criterion(7, "ramsey: tau recovered within 10%, fringe amplitude 0.5 +/- 0.02", [] {
    const auto decay_cfg = shipped("ramsey_decay.ini");
    const auto summary = summarize(decay_cfg, run_scenario(decay_cfg));
    require(summary.decay.has_value(), "no decay fit");
    require(std::abs(summary.decay->tau_s - 1.8) <= 0.18,
            fmt("fitted tau %.3f s outside 1.8 +/- 0.18", summary.decay->tau_s));

    const auto fringe_cfg = shipped("ramsey_fringe.ini");
    const auto fringe = summarize(fringe_cfg, run_scenario(fringe_cfg));
    require(fringe.sinusoid.has_value(), "no fringe fit");
    require(std::abs(fringe.sinusoid->amplitude - 0.5) <= 0.02,
            fmt("fringe amplitude %.4f outside 0.5 +/- 0.02", fringe.sinusoid->amplitude));
  });

  run_criterion(8, "24 h stability with shipped drifts keeps the fringe within 8 degrees", [] {
    const auto cfg = shipped("stability_24h.ini");
    const auto summary = summarize(cfg, run_scenario(cfg));
    require(summary.spread_deg.has_value(), "no spread");
    require(*summary.spread_deg < 8.0, fmt("spread %.3f deg", *summary.spread_deg));
  });

  run_criterion(9, "error budget brackets the observed fidelity", [] {
    const auto b = error_budget(0.08, 0.05);
    require(b.fidelity >= 0.85 && b.fidelity <= 0.88, fmt("fidelity %.4f", b.fidelity));
    require(std::abs(error_budget(0.0, 0.0).fidelity - 1.0) < 1e-12, "clean budget is not 1");
  });

  run_criterion(10, "property batch: unitarity, planner fuzz, fitter, determinism, < 60 s", [] {
    const auto t0 = Clock::now();

    // Unitarity over 1e4 random operations.
    Rng rng(55);
    qubits::TwoQubitState s;
    for (int k = 0; k < 10000; ++k) {
      if (rng.bernoulli(0.5)) {
        s = qubits::ms_gate(s, rng.uniform(-kPi, kPi));
      } else {
        s = qubits::rotate(s, rng.bernoulli(0.5) ? 1 : 2, rng.uniform(0, kPi),
                           rng.uniform(-kPi, kPi));
      }
    }
    require(std::abs(s.norm() - 1.0) < 1e-12, "norm drifted beyond 1e-12");

    // Planner against brute force on 100 randomized inputs.
    for (int trial = 0; trial < 100; ++trial) {
      planner::PlannerInput in;
      in.qubit_hz = rng.uniform(10e9, 15e9);
      in.mode_hz = rng.uniform(1e6, 5e6);
      in.detuning_hz = rng.uniform(0.0, 50e3);
      in.rep_rate_hz = rng.uniform(70e6, 90e6);
      in.aom_a_candidates_hz = {rng.uniform(50e6, 200e6)};
      in.aom_a_signs = {+1, -1};
      const double c = rng.uniform(120e6, 220e6);
      const double w = rng.uniform(10e6, 60e6);
      in.aom_b_window = {c - 0.5 * w, c + 0.5 * w};
      in.aom_a_window = {40e6, 240e6};
      in.tooth_min = static_cast<int>(rng.uniform(50, 120));
      in.tooth_max = in.tooth_min + static_cast<int>(rng.uniform(100, 280));
      const auto set = planner::plan_gate(in);
      std::size_t count = 0;
      const double red_target = in.qubit_hz - in.mode_hz + in.detuning_hz;
      const double blue_target = in.qubit_hz + in.mode_hz - in.detuning_hz;
      for (int n = in.tooth_min; n <= in.tooth_max; ++n) {
        for (int m = in.tooth_min; m <= in.tooth_max; ++m) {
          for (int sign : in.aom_a_signs) {
            const double a = in.aom_a_candidates_hz[0];
            const double red = n * in.rep_rate_hz - sign * a - red_target;
            const double blue = blue_target - m * in.rep_rate_hz - sign * a;
            if (!in.aom_a_window.contains(a)) continue;
            if (!in.aom_b_window.contains(red) || !in.aom_b_window.contains(blue)) continue;
            ++count;
            bool found = false;
            for (const auto& p : set.plans) {
              if (p.red_tooth == n && p.blue_tooth == m && p.aom_a_sign == sign) found = true;
            }
            require(found, "planner missed a feasible solution");
          }
        }
      }
      require(count == set.plans.size(), "planner emitted extra solutions");
      for (const auto& p : set.plans) {
        require(planner::validate_plan(p, in).ok(), "emitted plan fails validation");
      }
    }

    // Fitter recovery on noise-free data.
    for (int trial = 0; trial < 50; ++trial) {
      const double amplitude = rng.uniform(0.1, 2.0);
      const double phase = rng.uniform(-kPi, kPi);
      const double offset = rng.uniform(-1.0, 1.0);
      std::vector<double> xs, ys;
      for (int j = 0; j < 24; ++j) {
        xs.push_back(kTwoPi * j / 24);
        ys.push_back(offset + amplitude * std::cos(2.0 * xs.back() + phase));
      }
      const auto fit = fit_sinusoid(xs, ys, 2.0);
      require(std::abs(fit.amplitude - amplitude) < 1e-9, "amplitude recovery beyond 1e-9");
      require(std::abs(wrap_phase(fit.phase_rad - phase)) < 1e-9, "phase recovery beyond 1e-9");
    }

    // Bit-identical reruns, parallel and serial.
    const auto cfg = shipped("parity_scan.ini");
    const auto a = run_scenario(cfg, Exec::kParallel);
    const auto b = run_scenario(cfg, Exec::kParallel);
    const auto c = run_scenario(cfg, Exec::kSerial);
    const auto csv_a = io::run_result_csv(a, 1);
    require(csv_a == io::run_result_csv(b, 1), "parallel rerun differs");
    require(csv_a == io::run_result_csv(c, 1), "serial reference differs");

    const double dt = elapsed_s(t0);
    require(dt < 60.0, fmt("property batch took %.1f s", dt));
  });

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
