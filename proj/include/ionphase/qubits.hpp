#pragma once

#include <array>
#include <complex>

namespace ionphase::qubits {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Geometry { kInsensitive, kSensitive };

/// Raman beam arrangement for the entangling gate.
///
/// `insensitive`: the red and blue sideband wave-vector differences point in
/// opposite directions, so a common optical path shift cancels out of the
/// gate phase.  `sensitive`: they point the same way and the shift is
/// imprinted twice.  Ion positions are measured along the trap axis; the
/// wave-vector difference addresses the transverse mode, so only its
/// misalignment projection sin(theta) * delta_k couples to position.
struct BeamGeometry {
  Geometry geometry = Geometry::kInsensitive;
  double delta_k_rad_per_m = kTwoPi / 250e-9;
  std::array<double, 2> ion_position_m{0.0, 0.0};
  double misalignment_rad = 0.0;

  double lambda_prime_m() const { return kTwoPi / delta_k_rad_per_m; }
  static BeamGeometry from_lambda_prime(Geometry g, double lambda_prime_m);
};

/// Drive phases applied to the gate AOMs.
struct RfPhases {
  double aom_a_rad = 0.0;
  double red_rad = 0.0;   // AOM B, red sideband tone
  double blue_rad = 0.0;  // AOM B, blue sideband tone
};

/// Slowly varying imperfections fed into the phase algebra: an optical path
/// length offset on the two-tone beam and a common reference-clock offset.
struct NoiseState {
  double path_drift_m = 0.0;
  double clock_offset_rad = 0.0;
};

/// Per-ion sideband, spin and motional phases plus the gate phase.
/// Invariants by construction: spin = -(red + blue) per ion and
/// gate = spin[0] + spin[1].
struct GatePhaseSet {
  std::array<double, 2> red_sideband_rad{};
  std::array<double, 2> blue_sideband_rad{};
  std::array<double, 2> spin_rad{};
  std::array<double, 2> motional_rad{};
  double gate_rad = 0.0;
};

/// Two-qubit register, amplitudes ordered |00>, |01>, |10>, |11>.
/// `fringe_contrast` records accumulated classical contrast loss; it scales
/// the parity fringe and the coherent fraction in sampled measurements.
struct TwoQubitState {
  std::array<std::complex<double>, 4> amp{
      std::complex<double>(1.0, 0.0), {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  double fringe_contrast = 1.0;

  double norm() const;
  double probability(int index) const;
  static TwoQubitState basis(int index);
};

/// Sideband/spin/motional phase bookkeeping for both ions.  The path drift
/// enters as an optical phase on the two-tone beam, i.e. it adds to the red
/// and blue drive phases before the geometry-dependent phase differences are
/// formed; the clock offset adds to all three drives and always cancels.
GatePhaseSet sideband_phases(const BeamGeometry& g, const RfPhases& rf, const NoiseState& noise);

/// Gate phase from drive phases alone: blue - red for the insensitive
/// geometry (the single-beam phase cancels), red + blue - 2*single for the
/// sensitive one.
double gate_phase_from_rf(const BeamGeometry& g, const RfPhases& rf);

/// Maximally entangling two-sideband gate.  |00> and |11> exchange with
/// phases -/+ gate_phase, |01> and |10> exchange with a bare -i, each pair
/// normalized by 1/sqrt(2).  `contrast` < 1 multiplies the state's recorded
/// fringe contrast (classical mixing, not amplitude damping).
TwoQubitState ms_gate(const TwoQubitState& state, double gate_phase_rad, double contrast = 1.0);

/// Carrier rotation R(theta, phi) = cos(theta/2) I
///   - i sin(theta/2) (cos(phi) X + sin(phi) Y) on qubit 1 or 2.
TwoQubitState rotate(const TwoQubitState& state, int qubit, double theta_rad, double phi_rad);

/// P(00) + P(11) - P(01) - P(10), scaled by the recorded fringe contrast.
double parity(const TwoQubitState& state);

/// Expected bright-state probability of the shuttled-ion alignment scan:
/// cos^2(pi * d * sin(theta) / lambda').
double alignment_signal(double shuttle_m, double misalignment_rad, double lambda_prime_m);

/// Motional phase difference across an ion separation under beam
/// misalignment: delta_k * separation * sin(theta).
double misalignment_phase(double delta_k_rad_per_m, double separation_m, double misalignment_rad);

}  // namespace ionphase::qubits
