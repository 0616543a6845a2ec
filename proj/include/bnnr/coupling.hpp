#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bnnr/elasticity.hpp"

namespace bnnr {

struct Qubit {
  double position = 0;  // z_k (m)
  double detuning = 0;  // Delta_k (rad/s)
  double rabi = 0;      // Omega_k (rad/s), may be negative
  double decay = 0;     // kappa_k (rad/s)
};

struct QubitEnsemble {
  std::vector<Qubit> qubits;

  int size() const { return static_cast<int>(qubits.size()); }
  /// Checks positions and rates; returns warnings for near-coincident qubits.
  std::vector<std::string> validate(double length) const;
};

/// Coherent (G) and dissipative (Gamma) qubit-qubit matrices with the
/// per-mode coupling table and provenance metadata.
struct CouplingMatrices {
  Eigen::MatrixXd G;       // N x N, rad/s
  Eigen::MatrixXd Gamma;   // N x N, rad/s
  Eigen::MatrixXd lambda;  // N x n_max, rad/s
  int n_max = 0;
  std::optional<int> excluded_mode;
  double temperature = 0;
  double tail_fraction = 0;  // relative contribution of the last decade of modes
  bool truncation_warning = false;
};

/// Qubit-phonon coupling rate lambda(z, n) = Xi/2 * x_zp^2 * [psi'_n(z)]^2.
double coupling_rate(const ModeSpectrum& spectrum, int n, double z);

/// Bose-Einstein occupation; 0 at T = 0 and overflow-safe.
double thermal_occupation(double omega, double temperature_K);

/// Bath correlator C_m^+ = [gamma(nbar + 1/2) + i omega] / (gamma^2/4 + omega^2).
std::complex<double> bath_correlator(const Mode& mode, double temperature_K);

CouplingMatrices effective_matrices(const QubitEnsemble& ensemble, const ModeSpectrum& spectrum,
                                    std::optional<int> excluded_mode = std::nullopt);

/// N interior equal-strain maxima of mode N+1, matched within 5% relative in
/// their coupling rate (boundary-layer peaks sit far outside the family).
std::vector<double> equal_strain_positions(const ModeSpectrum& spectrum, int n_qubits);

void write_couplings_csv(const CouplingMatrices& cm, const DeviceConfig& device,
                         const std::string& path);

}  // namespace bnnr
