#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "ionphase/chain_presets.hpp"
#include "ionphase/config.hpp"
#include "ionphase/errors.hpp"
#include "ionphase/io.hpp"
#include "ionphase/planner.hpp"
#include "ionphase/runner.hpp"
#include "ionphase/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ionphase;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;     // usage / malformed config
constexpr int kExitContract = 2;  // infeasible plan or failed verification

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool serial = false;
};

cfg::ConfigFile load_config(const CommonOptions& opt) {
  auto c = cfg::ConfigFile::parse_file(opt.config_path);
  if (c.require_int("schema_version") != 1) {
    throw ConfigError(opt.config_path + ": unsupported schema_version (expected 1)");
  }
  return c;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

bool want_csv(const std::string& f) { return f == "csv" || f == "both"; }
bool want_json(const std::string& f) { return f == "json" || f == "both"; }

int cmd_plan(const CommonOptions& opt) {
  auto c = load_config(opt);
  auto input = chain_presets::planner_input_from_config(c);
  const auto gate = planner::plan_gate(input);
  const auto coprop = planner::plan_copropagating(input);
  ensure_out_dir(opt.out_dir);

  const std::uint64_t hash = c.content_hash();
  if (want_csv(opt.format)) {
    io::write_file(opt.out_dir + "/gate_plans.csv", io::gate_plans_csv(gate, hash));
    io::write_file(opt.out_dir + "/coprop_plans.csv", io::coprop_plans_csv(coprop, hash));
  }
  if (want_json(opt.format)) {
    io::write_file(opt.out_dir + "/gate_plans.json", io::gate_plans_json(gate, hash).dump(2) + "\n");
    io::write_file(opt.out_dir + "/coprop_plans.json",
                   io::coprop_plans_json(coprop, hash).dump(2) + "\n");
  }

  std::printf("gate plans: %zu, copropagating plans: %zu\n", gate.plans.size(),
              coprop.plans.size());
  if (!gate.plans.empty()) {
    const auto& p = gate.plans.front();
    std::printf("best gate plan: n=%d m=%d s_a=%+d aom_a=%.6g MHz drives %.6g / %.6g MHz\n",
                p.red_tooth, p.blue_tooth, p.aom_a_sign, p.aom_a_hz / 1e6, p.red_drive_hz / 1e6,
                p.blue_drive_hz / 1e6);
  }
  if (gate.plans.empty()) {
    std::fprintf(stderr, "no feasible gate plan: %s\n", gate.diagnostics.c_str());
    if (!coprop.plans.empty()) {
      std::fprintf(stderr, "(copropagating plans exist: %zu)\n", coprop.plans.size());
    }
    return kExitContract;
  }
  return kExitOk;
}

int cmd_chain_verify(const CommonOptions& opt) {
  auto c = load_config(opt);
  chain_presets::ChainConfig cc;
  try {
    cc = chain_presets::chain_from_config(c);
  } catch (const ConstraintError& e) {
    std::fprintf(stderr, "infeasible plan: %s\n", e.what());
    return kExitContract;
  }
  const auto graph = chain_presets::build_preset(cc.preset, cc.params);
  const auto& info = *graph.preset_info();

  std::printf("preset=%s master=%.6g MHz rep_rate=%.6g MHz plan n=%d m=%d\n",
              chain_presets::to_string(cc.preset).c_str(), cc.params.master_hz / 1e6,
              cc.params.rep_rate_hz / 1e6, info.red_tooth, info.blue_tooth);
  if (opt.out_dir != ".") {
    ensure_out_dir(opt.out_dir);
    io::write_file(opt.out_dir + "/chain_graph.json",
                   chain_presets::to_json(graph).dump(2) + "\n");
  }
  for (const auto& n : graph.nodes()) {
    if (const auto* pll = std::get_if<chain::Pll>(&n.kind)) {
      std::printf("  %-12s lock %+d, beat %.6g MHz\n", n.name.c_str(), pll->lock_sign,
                  pll->nominal_hz / 1e6);
    }
  }

  struct Row {
    chain::Transition t;
    bool check;
    double expected_bypassed;
  };
  const Row rows[] = {
      {chain::Transition::kRedSideband, true, static_cast<double>(info.red_tooth)},
      {chain::Transition::kBlueSideband, true, static_cast<double>(info.blue_tooth)},
      {chain::Transition::kCarrierCopropagating, info.coprop_tooth != 0,
       static_cast<double>(info.coprop_tooth)},
      {chain::Transition::kMicrowave, true, 0.0},
  };

  bool pass = true;
  const auto bypassed = graph.with_feed_forward(false);
  for (const auto& row : rows) {
    if (!row.check) continue;
    const auto configured = chain_presets::configure_for(graph, row.t);
    const auto configured_bypassed = chain_presets::configure_for(bypassed, row.t);
    const double s_on = chain::drift_sensitivity(configured, row.t);
    const double s_off = chain::drift_sensitivity(configured_bypassed, row.t);
    const bool ok = std::abs(s_on) < 1e-6;
    pass = pass && ok;
    std::printf("  %-22s dnu/ddrift = %.3e (feed-forward on)  %s   bypassed: %.6g (expect %g)\n",
                chain::to_string(row.t).c_str(), s_on, ok ? "PASS" : "FAIL", s_off,
                row.expected_bypassed);
  }
  std::printf("%s\n", pass ? "OVERALL PASS" : "OVERALL FAIL");
  return pass ? kExitOk : kExitContract;
}

int cmd_run(const CommonOptions& opt) {
  auto c = load_config(opt);
  auto scenario = experiments::scenario_from_config(c);
  if (opt.has_seed) scenario.seed = opt.seed;

  const auto result = experiments::run_scenario(
      scenario, opt.serial ? experiments::Exec::kSerial : experiments::Exec::kParallel);
  ensure_out_dir(opt.out_dir);

  const std::uint64_t hash = c.content_hash();
  const std::string stem =
      opt.out_dir + "/" + result.scenario + "_" + std::to_string(result.seed);
  if (want_csv(opt.format)) io::write_file(stem + ".csv", io::run_result_csv(result, hash));
  if (want_json(opt.format)) {
    io::write_file(stem + ".json", io::run_result_json(result, hash).dump(2) + "\n");
  }

  const auto summary = experiments::summarize(scenario, result);
  std::printf("%s [%zu points, seed %llu]\n", summary.text.c_str(), result.points.size(),
              static_cast<unsigned long long>(result.seed));
  return kExitOk;
}

int cmd_list_scenarios() {
  static const char* blurbs[] = {
      "ramsey          two-pulse coherence scan (sweep delay_s or raman_phase_rad)",
      "parity_scan     entangling gate + analysis-phase sweep of the parity fringe",
      "sideband_shift  fitted fringe phase vs a sideband drive phase offset",
      "random_phase    parity fringe under a randomized common sideband phase",
      "stability       repeated fringe-phase fits over a simulated wall-clock day",
      "alignment       shuttled-ion brightness vs distance for a misaligned beam",
  };
  for (const auto* b : blurbs) std::printf("%s\n", b);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ionphase: comb-referenced qubit-drive planning, verification and scenarios"};
  app.require_subcommand(1);

  CommonOptions opt;
  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* o = sub->add_option("--config", opt.config_path, "configuration file");
    if (needs_config) o->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--format", opt.format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_option("--seed", opt.seed, "seed override")->each([&](const std::string&) {
      opt.has_seed = true;
    });
    sub->add_flag("--serial", opt.serial, "run sweep points on one thread");
  };

  auto* plan = app.add_subcommand("plan", "solve the comb-tooth frequency plans");
  add_common(plan, true);
  auto* verify = app.add_subcommand("chain-verify", "check drift cancellation of a chain preset");
  add_common(verify, true);
  auto* run = app.add_subcommand("run", "execute a seeded scenario");
  add_common(run, true);
  app.add_subcommand("list-scenarios", "print the known scenario ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (plan->parsed()) return cmd_plan(opt);
    if (verify->parsed()) return cmd_chain_verify(opt);
    if (run->parsed()) return cmd_run(opt);
    return cmd_list_scenarios();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const ConstraintError& e) {
    std::fprintf(stderr, "constraint violation: %s\n", e.what());
    return kExitContract;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}
