#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace bnnr {

/// Partial transpose over the qubits listed in subset_a (0-based, all
/// subsystems assumed two-level).
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int n_qubits,
                                   const std::vector<int>& subset_a);

/// E_N = log2 || rho^{T_A} ||_1.
double log_negativity(const Eigen::MatrixXcd& rho, int n_qubits,
                      const std::vector<int>& subset_a);

/// Wootters concurrence of a two-qubit density matrix.
double concurrence(const Eigen::MatrixXcd& rho);

struct RoofOptions {
  int samples = 400;           // random decompositions per estimate
  int repeats = 3;             // independent estimator repeats for the spread
  std::uint64_t seed = 12345;
  double spread_tol = 0.05;    // flag low confidence above this
};

struct RoofEstimate {
  double value = 0;       // min over samples (upper bound on the roof)
  double spread = 0;      // max - min across repeats
  bool low_confidence = false;
};

/// One-vs-rest tangle of the focus qubit: exact 4 det(rho_focus) for pure
/// inputs, convex-roof sampling estimate for mixed ones.
RoofEstimate tangle_one_vs_rest(const Eigen::MatrixXcd& rho, int n_qubits, int focus,
                                const RoofOptions& opts = {});

struct GmeResult {
  double value = 0;
  double spread = 0;
  bool low_confidence = false;
  int best_focus = 0;
};

/// Genuine multipartite residual entanglement E^{1|2|...|N}: monogamy
/// decomposition minimized over the focus qubit. N <= 7.
GmeResult gme_residual(const Eigen::MatrixXcd& rho, int n_qubits, const RoofOptions& opts = {});

Eigen::MatrixXcd collective_spin(int n_qubits, char axis);

struct QFIResult {
  double F_Q = 0;
  double mean = 0;                     // F_Q / N
  Eigen::Vector3d direction{0, 0, 1};  // optimal unit vector when optimized
  double F_x = 0, F_y = 0, F_z = 0;    // fixed-axis values
};

/// QFI for a fixed observable.
double qfi(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& observable,
           double eigen_cutoff = 1e-12);

/// QFI maximized over collective-spin directions J_n.
QFIResult qfi_optimal(const Eigen::MatrixXcd& rho, int n_qubits, double eigen_cutoff = 1e-12);

}  // namespace bnnr
