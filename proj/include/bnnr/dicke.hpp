#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bnnr/liouville.hpp"

namespace bnnr {

/// Mean-field Dicke-Ising problem: one selected boson mode coupled to N
/// driven qubits, residual qubit-qubit couplings with the selected mode
/// deducted.
struct DickeConfig {
  QubitEnsemble ensemble;
  Eigen::VectorXd lambda;     // per-qubit coupling to the selected mode (rad/s)
  double omega = 0;           // selected-mode frequency (rad/s)
  double gamma = 0;           // selected-mode damping (rad/s)
  double nbar = 0;            // selected-mode thermal occupation
  Eigen::MatrixXd residual_G;      // selected mode excluded
  Eigen::MatrixXd residual_Gamma;  // selected mode excluded
  std::optional<int> selected_mode;  // metadata: which index was deducted

  std::complex<double> initial_guess{1.0, 0.0};
  double tolerance = 1e-6;
  int max_iterations = 200;
  double damping = 1.0;  // update mixing; auto-halved on oscillation

  void validate() const;
};

struct FixedPointTrace {
  std::vector<std::complex<double>> iterates;
  std::vector<double> rel_errors;
  bool converged = false;
  bool limit_cycle = false;  // period-2 oscillation detected
  std::complex<double> a{0, 0};
  double order_parameter = 0;  // |<a>| / sqrt(N)
  Eigen::VectorXd sz;          // steady-state <sigma_z> per qubit
};

/// <a>_ss = sum_k lambda_k <sigma_z_k> / (i gamma - 2 omega).
std::complex<double> order_parameter_from_spins(const Eigen::VectorXd& lambda,
                                                const Eigen::VectorXd& sz, double omega,
                                                double gamma);

/// Self-consistent mean-field iteration over the modified reduced master
/// equation with Delta_k -> Delta_k + 2 lambda_k Re<a>.
FixedPointTrace dicke_fixed_point(const DickeConfig& config);

struct CriticalCouplings {
  double lambda_c = 0;    // with Ising corrections
  double lambda_c0 = 0;   // standard Dicke limit
  bool always_superradiant = false;  // negative radicand
};

/// Routh-Hurwitz critical coupling for identical qubits.
CriticalCouplings analytic_critical(int n_qubits, double omega, double gamma, double Omega,
                                    double G, double Gamma_diag, double kappa);

struct PhaseScanPoint {
  double lambda = 0;
  double Omega = 0;
  double order_parameter = 0;
  int iterations = 0;
  bool converged = false;
};

struct PhaseScanResult {
  std::vector<PhaseScanPoint> points;
  std::optional<double> critical_lambda;  // refined numeric lambda_c
};

/// Sweep lambda (warm-started) at fixed drive; detects and bisection-refines
/// the onset of |<a>|/sqrt(N) above threshold.
PhaseScanResult phase_scan(DickeConfig config, const std::vector<double>& lambda_grid,
                           double threshold = 1e-2);

}  // namespace bnnr
