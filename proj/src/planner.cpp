#include "ionphase/planner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ionphase::planner {

void PlannerInput::validate() const {
  if (!(qubit_hz > 0.0)) throw std::invalid_argument("planner: qubit splitting must be > 0");
  if (!(rep_rate_hz > 0.0)) throw std::invalid_argument("planner: repetition rate must be > 0");
  if (detuning_hz < 0.0) throw std::invalid_argument("planner: detuning must be >= 0");
  if (aom_a_window.width_hz() < 0.0 || aom_b_window.width_hz() < 0.0) {
    throw std::invalid_argument("planner: AOM windows must be non-empty");
  }
  if (tooth_min > tooth_max) throw std::invalid_argument("planner: empty tooth range");
  if (aom_a_candidates_hz.empty()) throw std::invalid_argument("planner: no AOM A candidates");
  if (aom_a_signs.empty()) throw std::invalid_argument("planner: no AOM A signs allowed");
  for (int s : aom_a_signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("planner: AOM A sign must be +1 or -1");
  }
}

GatePlan make_gate_plan(const PlannerInput& in, int red_tooth, int blue_tooth,
                        int aom_a_sign, double aom_a_hz) {
  const double red_target = in.qubit_hz - in.mode_hz + in.detuning_hz;
  const double blue_target = in.qubit_hz + in.mode_hz - in.detuning_hz;
  GatePlan p;
  p.red_tooth = red_tooth;
  p.blue_tooth = blue_tooth;
  p.aom_a_sign = aom_a_sign;
  p.aom_a_hz = aom_a_hz;
  p.red_drive_hz = red_tooth * in.rep_rate_hz - aom_a_sign * aom_a_hz - red_target;
  p.blue_drive_hz = blue_target - blue_tooth * in.rep_rate_hz - aom_a_sign * aom_a_hz;
  p.residual_red_hz =
      (red_tooth * in.rep_rate_hz - aom_a_sign * aom_a_hz - p.red_drive_hz) - red_target;
  p.residual_blue_hz =
      (blue_tooth * in.rep_rate_hz + p.blue_drive_hz + aom_a_sign * aom_a_hz) - blue_target;
  return p;
}

double gate_plan_merit(const GatePlan& plan, const Window& aom_b) {
  const double c = aom_b.center_hz();
  return std::abs(plan.red_drive_hz - c) + std::abs(plan.blue_drive_hz - c);
}

namespace {

bool plan_order(const PlannerInput& in, const GatePlan& a, const GatePlan& b) {
  const double ma = gate_plan_merit(a, in.aom_b_window);
  const double mb = gate_plan_merit(b, in.aom_b_window);
  return std::tie(ma, a.red_tooth, a.blue_tooth, a.aom_a_sign, a.aom_a_hz) <
         std::tie(mb, b.red_tooth, b.blue_tooth, b.aom_a_sign, b.aom_a_hz);
}

}  // namespace

GatePlanSet plan_gate(const PlannerInput& in) {
  in.validate();
  const int n_lo = in.tooth_min, n_hi = in.tooth_max;
  const int count = n_hi - n_lo + 1;

  long long rejected_aom_a = 0, rejected_red = 0, rejected_blue = 0;
  std::vector<std::vector<GatePlan>> per_tooth(static_cast<std::size_t>(count));

  // The red-tooth loop is embarrassingly parallel; blocks merge in tooth
  // order so the output is identical to the serial path.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : rejected_aom_a, rejected_red, rejected_blue)
#endif
  for (int n = n_lo; n <= n_hi; ++n) {
    auto& local = per_tooth[static_cast<std::size_t>(n - n_lo)];
    for (int sign : in.aom_a_signs) {
      for (double aom_a : in.aom_a_candidates_hz) {
        if (!in.aom_a_window.contains(aom_a)) {
          ++rejected_aom_a;
          continue;
        }
        GatePlan probe = make_gate_plan(in, n, n, sign, aom_a);
        if (!in.aom_b_window.contains(probe.red_drive_hz)) {
          ++rejected_red;
          continue;
        }
        for (int m = in.tooth_min; m <= in.tooth_max; ++m) {
          GatePlan p = make_gate_plan(in, n, m, sign, aom_a);
          if (!in.aom_b_window.contains(p.blue_drive_hz)) {
            ++rejected_blue;
            continue;
          }
          local.push_back(p);
        }
      }
    }
  }

  GatePlanSet out;
  for (auto& block : per_tooth) {
    out.plans.insert(out.plans.end(), block.begin(), block.end());
  }
  std::sort(out.plans.begin(), out.plans.end(),
            [&in](const GatePlan& a, const GatePlan& b) { return plan_order(in, a, b); });

  if (out.plans.empty()) {
    std::ostringstream d;
    d << "no feasible (n, m, sign, aom_a): " << rejected_aom_a
      << " aom_a candidates outside window, " << rejected_red
      << " red tones outside AOM B window, " << rejected_blue
      << " blue tones outside AOM B window";
    out.diagnostics = d.str();
  }
  return out;
}

CoPropPlanSet plan_copropagating(const PlannerInput& in) {
  in.validate();
  CoPropPlanSet out;
  const Window& w = in.aom_b_window;
  const double center = w.center_hz();

  for (int p = in.tooth_min; p <= in.tooth_max; ++p) {
    // Required tone separation: drive1 - drive2 = qubit - p*rep.
    const double gap = in.qubit_hz - p * in.rep_rate_hz;
    if (std::abs(gap) > w.width_hz()) continue;
    CoPropPlan plan;
    plan.tooth = p;
    plan.drive1_hz = center + 0.5 * gap;
    plan.drive2_hz = center - 0.5 * gap;
    plan.residual_hz = (p * in.rep_rate_hz + plan.drive1_hz - plan.drive2_hz) - in.qubit_hz;
    if (!w.contains(plan.drive1_hz) || !w.contains(plan.drive2_hz)) continue;
    out.plans.push_back(plan);
  }

  std::sort(out.plans.begin(), out.plans.end(), [&](const CoPropPlan& a, const CoPropPlan& b) {
    const double ma = std::abs(a.drive1_hz - center) + std::abs(a.drive2_hz - center);
    const double mb = std::abs(b.drive1_hz - center) + std::abs(b.drive2_hz - center);
    return std::tie(ma, a.tooth) < std::tie(mb, b.tooth);
  });

  const double ideal = in.qubit_hz / in.rep_rate_hz;
  int nearest = static_cast<int>(std::llround(ideal));
  nearest = std::clamp(nearest, in.tooth_min, in.tooth_max);
  out.nearest_tooth = nearest;
  out.required_gap_hz = in.qubit_hz - nearest * in.rep_rate_hz;
  if (out.plans.empty()) {
    std::ostringstream d;
    d << "no tooth places both tones inside the AOM B window; nearest tooth " << nearest
      << " needs a tone separation of " << out.required_gap_hz / 1e6 << " MHz against a window of "
      << w.width_hz() / 1e6 << " MHz";
    out.diagnostics = d.str();
  }
  return out;
}

bool ValidationReport::ok(double tol_hz) const {
  return red_in_window && blue_in_window && aom_a_in_window &&
         std::abs(residual_red_hz) < tol_hz && std::abs(residual_blue_hz) < tol_hz;
}

bool CoPropValidationReport::ok(double tol_hz) const {
  return drive1_in_window && drive2_in_window && std::abs(residual_hz) < tol_hz;
}

ValidationReport validate_plan(const GatePlan& p, const PlannerInput& in) {
  ValidationReport r;
  const double red_target = in.qubit_hz - in.mode_hz + in.detuning_hz;
  const double blue_target = in.qubit_hz + in.mode_hz - in.detuning_hz;
  r.residual_red_hz =
      (p.red_tooth * in.rep_rate_hz - p.aom_a_sign * p.aom_a_hz - p.red_drive_hz) - red_target;
  r.residual_blue_hz =
      (p.blue_tooth * in.rep_rate_hz + p.blue_drive_hz + p.aom_a_sign * p.aom_a_hz) - blue_target;
  r.red_in_window = in.aom_b_window.contains(p.red_drive_hz);
  r.blue_in_window = in.aom_b_window.contains(p.blue_drive_hz);
  r.aom_a_in_window = in.aom_a_window.contains(p.aom_a_hz);
  return r;
}

CoPropValidationReport validate_plan(const CoPropPlan& p, const PlannerInput& in) {
  CoPropValidationReport r;
  r.residual_hz = (p.tooth * in.rep_rate_hz + p.drive1_hz - p.drive2_hz) - in.qubit_hz;
  r.drive1_in_window = in.aom_b_window.contains(p.drive1_hz);
  r.drive2_in_window = in.aom_b_window.contains(p.drive2_hz);
  return r;
}

}  // namespace ionphase::planner
