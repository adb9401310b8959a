#include "ionphase/qubits.hpp"

#include <cmath>
#include <stdexcept>

namespace ionphase::qubits {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_normalized(const TwoQubitState& s, const char* op) {
  if (std::abs(s.norm() - 1.0) > kNormTolerance) {
    throw std::invalid_argument(std::string(op) + ": state is not normalized");
  }
}

void require_geometry(const BeamGeometry& g) {
  if (!(g.delta_k_rad_per_m > 0.0)) {
    throw std::invalid_argument("BeamGeometry: delta_k must be > 0");
  }
}

}  // namespace

BeamGeometry BeamGeometry::from_lambda_prime(Geometry g, double lambda_prime_m) {
  if (!(lambda_prime_m > 0.0)) {
    throw std::invalid_argument("BeamGeometry: lambda' must be > 0");
  }
  BeamGeometry b;
  b.geometry = g;
  b.delta_k_rad_per_m = kTwoPi / lambda_prime_m;
  return b;
}

double TwoQubitState::norm() const {
  double n = 0.0;
  for (const auto& a : amp) n += std::norm(a);
  return std::sqrt(n);
}

double TwoQubitState::probability(int index) const {
  if (index < 0 || index > 3) throw std::out_of_range("TwoQubitState::probability: bad index");
  return std::norm(amp[static_cast<std::size_t>(index)]);
}

TwoQubitState TwoQubitState::basis(int index) {
  if (index < 0 || index > 3) throw std::out_of_range("TwoQubitState::basis: bad index");
  TwoQubitState s;
  s.amp = {std::complex<double>(0.0, 0.0), {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  s.amp[static_cast<std::size_t>(index)] = 1.0;
  return s;
}

GatePhaseSet sideband_phases(const BeamGeometry& g, const RfPhases& rf, const NoiseState& noise) {
  require_geometry(g);
  const double path_phase = g.delta_k_rad_per_m * noise.path_drift_m;
  const double a = rf.aom_a_rad + noise.clock_offset_rad;
  const double red = rf.red_rad + noise.clock_offset_rad + path_phase;
  const double blue = rf.blue_rad + noise.clock_offset_rad + path_phase;

  double dphi_red, dphi_blue, blue_direction;
  if (g.geometry == Geometry::kInsensitive) {
    // Red: absorb from the single beam, emit into the two-tone beam.
    // Blue: the reverse, so the wave-vector difference flips direction.
    dphi_red = a - red;
    dphi_blue = blue - a;
    blue_direction = -1.0;
  } else {
    // Both sidebands absorb from the two-tone beam and emit into the single
    // beam: same direction, same drift sign.
    dphi_red = red - a;
    dphi_blue = blue - a;
    blue_direction = +1.0;
  }

  // Only the misalignment projection of delta_k couples to the ion position
  // along the trap axis; a perfectly aligned transverse drive has none.
  const double axial = g.delta_k_rad_per_m * std::sin(g.misalignment_rad);

  GatePhaseSet out;
  for (std::size_t i = 0; i < 2; ++i) {
    const double kx = axial * g.ion_position_m[i];
    out.red_sideband_rad[i] = 0.5 * (kx - dphi_red);
    out.blue_sideband_rad[i] = 0.5 * (blue_direction * kx - dphi_blue);
    out.spin_rad[i] = -(out.red_sideband_rad[i] + out.blue_sideband_rad[i]);
    out.motional_rad[i] = out.red_sideband_rad[i] - out.blue_sideband_rad[i];
  }
  out.gate_rad = out.spin_rad[0] + out.spin_rad[1];
  return out;
}

double gate_phase_from_rf(const BeamGeometry& g, const RfPhases& rf) {
  if (g.geometry == Geometry::kInsensitive) {
    return rf.blue_rad - rf.red_rad;
  }
  return rf.red_rad + rf.blue_rad - 2.0 * rf.aom_a_rad;
}

TwoQubitState ms_gate(const TwoQubitState& state, double gate_phase_rad, double contrast) {
  require_normalized(state, "ms_gate");
  if (!(contrast >= 0.0 && contrast <= 1.0)) {
    throw std::invalid_argument("ms_gate: contrast must lie in [0, 1]");
  }
  const std::complex<double> i(0.0, 1.0);
  const double inv = 1.0 / std::sqrt(2.0);
  const std::complex<double> ep = std::exp(i * gate_phase_rad);
  TwoQubitState out;
  out.amp[0] = inv * (state.amp[0] - i * ep * state.amp[3]);
  out.amp[1] = inv * (state.amp[1] - i * state.amp[2]);
  out.amp[2] = inv * (state.amp[2] - i * state.amp[1]);
  out.amp[3] = inv * (state.amp[3] - i * std::conj(ep) * state.amp[0]);
  out.fringe_contrast = state.fringe_contrast * contrast;
  return out;
}

TwoQubitState rotate(const TwoQubitState& state, int qubit, double theta_rad, double phi_rad) {
  require_normalized(state, "rotate");
  if (qubit != 1 && qubit != 2) {
    throw std::out_of_range("rotate: qubit index must be 1 or 2");
  }
  const std::complex<double> i(0.0, 1.0);
  const double c = std::cos(0.5 * theta_rad);
  const double s = std::sin(0.5 * theta_rad);
  const std::complex<double> m01 = -i * s * std::exp(-i * phi_rad);
  const std::complex<double> m10 = -i * s * std::exp(i * phi_rad);

  TwoQubitState out = state;
  const auto apply = [&](std::size_t lo, std::size_t hi) {
    const std::complex<double> a0 = state.amp[lo];
    const std::complex<double> a1 = state.amp[hi];
    out.amp[lo] = c * a0 + m01 * a1;
    out.amp[hi] = m10 * a0 + c * a1;
  };
  if (qubit == 1) {
    apply(0, 2);
    apply(1, 3);
  } else {
    apply(0, 1);
    apply(2, 3);
  }
  return out;
}

double parity(const TwoQubitState& state) {
  require_normalized(state, "parity");
  return state.fringe_contrast *
         (state.probability(0) - state.probability(1) - state.probability(2) + state.probability(3));
}

double alignment_signal(double shuttle_m, double misalignment_rad, double lambda_prime_m) {
  if (!(lambda_prime_m > 0.0)) {
    throw std::invalid_argument("alignment_signal: lambda' must be > 0");
  }
  const double c = std::cos(0.5 * kTwoPi * shuttle_m * std::sin(misalignment_rad) / lambda_prime_m);
  return c * c;
}

double misalignment_phase(double delta_k_rad_per_m, double separation_m, double misalignment_rad) {
  if (separation_m < 0.0) {
    throw std::invalid_argument("misalignment_phase: separation must be >= 0");
  }
  return delta_k_rad_per_m * separation_m * std::sin(misalignment_rad);
}

}  // namespace ionphase::qubits
