#pragma once

#include <cmath>
#include <vector>

namespace ionphase::chain {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// One spectral component of an RF or optical signal.
///
/// `frequency_hz` is the instantaneous frequency.  `phase_rad` is the phase
/// accumulated relative to the tone's nominal drift-free evolution, kept
/// unwrapped as a real accumulator; wrapping happens only where phases are
/// compared.  Tracking the deviation instead of the absolute optical phase
/// keeps the accumulators small over day-long simulated runs.
struct Tone {
  double frequency_hz = 0.0;
  double phase_rad = 0.0;

  bool valid() const {
    return std::isfinite(frequency_hz) && std::isfinite(phase_rad);
  }
};

/// Piecewise-constant repetition-rate offset.
///
/// `value(t)` is 0 before the first sample time and holds the last sample
/// value afterwards.  `integral(t)` is the exact closed-form integral over
/// [0, t], so accumulated comb phases carry no quadrature error.  An
/// additive `bias` (uniform over all t) is used by sensitivity probes.
class DriftProfile {
 public:
  DriftProfile() = default;
  DriftProfile(std::vector<double> times_s, std::vector<double> values_hz);

  double value(double t_s) const;
  double integral(double t_s) const;

  DriftProfile with_bias(double bias_hz) const;
  double bias_hz() const { return bias_hz_; }

  const std::vector<double>& times_s() const { return times_s_; }
  const std::vector<double>& values_hz() const { return values_hz_; }

 private:
  std::vector<double> times_s_;
  std::vector<double> values_hz_;
  std::vector<double> cumulative_;  // integral of the profile up to times_[i]
  double bias_hz_ = 0.0;
};

}  // namespace ionphase::chain
