#pragma once

#include <string>
#include <vector>

namespace ionphase::planner {

/// Usable RF interval of an acousto-optic modulator.
struct Window {
  double lo_hz = 0.0;
  double hi_hz = 0.0;

  double center_hz() const { return 0.5 * (lo_hz + hi_hz); }
  double width_hz() const { return hi_hz - lo_hz; }
  bool contains(double f_hz) const { return f_hz >= lo_hz && f_hz <= hi_hz; }
};

/// Inputs of the integer comb-tooth search.
///
/// The planner solves, over integer tooth indices n, m and the AOM A sign s,
///   qubit - mode + detuning = n*rep - s*aom_a - drive_red
///   qubit + mode - detuning = m*rep + drive_blue + s*aom_a
/// for the two-sideband gate, and qubit = p*rep + drive1 - drive2 for the
/// copropagating carrier.  All drive tones must land inside their AOM
/// windows.
struct PlannerInput {
  double qubit_hz = 12.64282e9;   // hyperfine splitting
  double mode_hz = 2.5e6;         // vibrational mode of interest
  double detuning_hz = 10e3;      // symmetric detuning from the mode
  double rep_rate_hz = 80.57e6;   // comb tooth spacing
  std::vector<double> aom_a_candidates_hz = {77.5e6};
  Window aom_a_window{60e6, 180e6};
  Window aom_b_window{150e6, 180e6};
  std::vector<int> aom_a_signs = {+1, -1};
  int tooth_min = 100;
  int tooth_max = 200;

  void validate() const;  // throws std::invalid_argument
};

/// One two-sideband solution.  `aom_a_sign` multiplies `aom_a_hz` in both
/// resonance lines; the physical diffraction order of AOM A is its negative.
struct GatePlan {
  int red_tooth = 0;   // n
  int blue_tooth = 0;  // m
  int aom_a_sign = +1;
  double aom_a_hz = 0.0;
  double red_drive_hz = 0.0;   // AOM B tone for the red sideband path
  double blue_drive_hz = 0.0;  // AOM B tone for the blue sideband path
  double residual_red_hz = 0.0;
  double residual_blue_hz = 0.0;
};

/// One copropagating-carrier solution.
struct CoPropPlan {
  int tooth = 0;  // p
  double drive1_hz = 0.0;
  double drive2_hz = 0.0;
  double residual_hz = 0.0;
};

struct GatePlanSet {
  std::vector<GatePlan> plans;
  std::string diagnostics;  // per-constraint rejection summary when empty
};

struct CoPropPlanSet {
  std::vector<CoPropPlan> plans;
  std::string diagnostics;
  int nearest_tooth = 0;        // best integer even when infeasible
  double required_gap_hz = 0.0; // tone separation that tooth would need
};

/// Residual tolerance on the resonance relations.  Twelve orders below the
/// smallest planner quantity; double arithmetic at 1e10 Hz stays well under.
inline constexpr double kResidualToleranceHz = 1e-3;

/// Drive tones and residuals for a fixed (n, m, sign, aom_a) choice.
GatePlan make_gate_plan(const PlannerInput& input, int red_tooth, int blue_tooth,
                        int aom_a_sign, double aom_a_hz);

/// All feasible gate plans, sorted by total tone distance from the AOM B
/// center; ties break on smaller n, then m, then sign, then aom_a.
GatePlanSet plan_gate(const PlannerInput& input);

/// All feasible copropagating plans (tone pair symmetric about the AOM B
/// center), sorted by tone distance from center, ties on smaller p.
CoPropPlanSet plan_copropagating(const PlannerInput& input);

double gate_plan_merit(const GatePlan& plan, const Window& aom_b);

struct ValidationReport {
  double residual_red_hz = 0.0;
  double residual_blue_hz = 0.0;
  bool red_in_window = false;
  bool blue_in_window = false;
  bool aom_a_in_window = false;

  bool ok(double tol_hz = kResidualToleranceHz) const;
};

struct CoPropValidationReport {
  double residual_hz = 0.0;
  bool drive1_in_window = false;
  bool drive2_in_window = false;

  bool ok(double tol_hz = kResidualToleranceHz) const;
};

/// Recomputes residuals and window membership from scratch.  Pure; never
/// throws; usable as a test oracle against plan_gate output.
ValidationReport validate_plan(const GatePlan& plan, const PlannerInput& input);
CoPropValidationReport validate_plan(const CoPropPlan& plan, const PlannerInput& input);

}  // namespace ionphase::planner
