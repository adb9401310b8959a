// Serial-vs-OpenMP comparison for the sweep runner and the planner search.
// The parallel path must reproduce the serial result bit for bit; this tool
// times both and checks equality on realistic workloads.

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "ionphase/planner.hpp"
#include "ionphase/runner.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using ionphase::experiments::Exec;
using ionphase::experiments::RunResult;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool identical(const RunResult& a, const RunResult& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].x != b.points[i].x || a.points[i].mean != b.points[i].mean ||
        a.points[i].std_error != b.points[i].std_error || a.points[i].aux != b.points[i].aux) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ionphase-bench: serial vs parallel runner comparison"};
  int points = 96;
  int shots = 20000;
  int repeats = 3;
  app.add_option("--points", points, "sweep points");
  app.add_option("--shots", shots, "shots per point");
  app.add_option("--repeats", repeats, "timing repeats");
  CLI11_PARSE(app, argc, argv);

  ionphase::experiments::ScenarioConfig cfg;
  cfg.id = ionphase::experiments::ScenarioId::kRandomPhase;
  cfg.sweep = {"analysis_phase_rad", 0.0, 6.0, points};
  cfg.shots = shots;
  cfg.geometry.geometry = ionphase::qubits::Geometry::kSensitive;
  cfg.seed = 7;

  std::printf("scenario random_phase: %d points x %d shots, per-shot gate rebuild\n", points,
              shots);
  RunResult serial, parallel;
  double t_serial = 1e300, t_parallel = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    serial = run_scenario(cfg, Exec::kSerial);
    t_serial = std::min(t_serial, ms_since(t0));
    t0 = Clock::now();
    parallel = run_scenario(cfg, Exec::kParallel);
    t_parallel = std::min(t_parallel, ms_since(t0));
  }
  std::printf("  serial   %9.2f ms\n", t_serial);
  std::printf("  parallel %9.2f ms   speedup %.2fx   identical: %s\n", t_parallel,
              t_serial / t_parallel, identical(serial, parallel) ? "yes" : "NO");

  ionphase::planner::PlannerInput input;
  input.tooth_min = 1;
  input.tooth_max = 400;
  input.aom_a_candidates_hz = {77.5e6, 160e6};
  std::printf("planner search: teeth [%d, %d], %zu candidates, both signs\n", input.tooth_min,
              input.tooth_max, input.aom_a_candidates_hz.size());
  double t_plan = 1e300;
  std::size_t found = 0;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = Clock::now();
    auto set = ionphase::planner::plan_gate(input);
    t_plan = std::min(t_plan, ms_since(t0));
    found = set.plans.size();
  }
  std::printf("  search   %9.2f ms   (%zu plans)\n", t_plan, found);

  if (!identical(serial, parallel)) return 1;
  return 0;
}
