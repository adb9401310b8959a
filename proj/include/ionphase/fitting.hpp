#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ionphase::experiments {

/// Least-squares sinusoid through (x, y):
///   y = offset + amplitude * cos(omega * x + phase_rad)
/// with the angular frequency known per scenario.  amplitude >= 0 and
/// phase_rad in (-pi, pi].
struct SinusoidFit {
  double amplitude = 0.0;
  double phase_rad = 0.0;
  double offset = 0.0;
  double residual_rms = 0.0;
};

SinusoidFit fit_sinusoid(std::span<const double> x, std::span<const double> y, double omega);

/// Least-squares fit of scale * exp(-(t / tau)^2) on log-transformed data
/// with y^2 variance weighting.  Non-positive samples are dropped;
/// `dropped` reports how many.  A non-decaying data set yields tau = inf.
struct GaussianDecayFit {
  double scale = 1.0;
  double tau_s = 0.0;
  double residual_rms = 0.0;
  std::size_t dropped = 0;
};

GaussianDecayFit fit_gaussian_decay(std::span<const double> t, std::span<const double> y);

/// Removes 2*pi jumps from a phase series (first sample kept as-is).
std::vector<double> unwrap_phases(std::span<const double> phases_rad);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Wraps into (-pi, pi].
double wrap_phase(double phase_rad);

}  // namespace ionphase::experiments
