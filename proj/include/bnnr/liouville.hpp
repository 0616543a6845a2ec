#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bnnr/coupling.hpp"

namespace bnnr {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;

/// Hermitian trace-one operator on the composite Hilbert space.
struct DensityMatrix {
  Eigen::MatrixXcd rho;
  std::vector<int> dims;  // per-subsystem dimensions, qubit ordering first

  int dim() const { return static_cast<int>(rho.rows()); }
  double hermiticity_defect() const;
  double trace_defect() const;
  double min_eigenvalue() const;
  void check(double herm_tol = 1e-10, double trace_tol = 1e-10, double psd_tol = 1e-8) const;
};

/// Liouvillian in column-stacking vectorization: vec(A X B) = (B^T (x) A) vec(X).
struct Superoperator {
  SparseC L;
  int dim = 0;  // Hilbert space dimension d; L is d^2 x d^2
  std::vector<int> dims;

  /// Left action on a vectorized operator.
  Eigen::VectorXcd apply(const Eigen::MatrixXcd& X) const;
  /// max_j |(vec 1)^dag L e_j| — trace-preservation defect.
  double trace_preservation_defect() const;
};

// --- elementary operators -------------------------------------------------

SparseC identity_op(int d);
/// Lift a single-site operator to site k (0-based) of a tensor product space.
SparseC lift(const SparseC& op, int site, const std::vector<int>& dims);
SparseC sigma_x(), sigma_y(), sigma_z(), sigma_minus();
SparseC annihilation(int cutoff);
SparseC kron(const SparseC& a, const SparseC& b);

/// -i[H, .] plus nothing else.
SparseC commutator_liouvillian(const SparseC& H);
/// rate/2 * (2 o rho o^dag - o^dag o rho - rho o^dag o) in vectorized form.
SparseC dissipator(const SparseC& o, double rate);

// --- model builders -------------------------------------------------------

/// H_eff = 1/2 sum_k (Delta_k sz + Omega_k sx) - 1/4 sum_{j,k} G_jk sz_j sz_k.
SparseC build_h_eff(const QubitEnsemble& ensemble, const CouplingMatrices& couplings,
                    int max_qubits = 10);

/// Reduced qubit-only master equation generator: coherent part from H_eff,
/// local decay at kappa_k, collective dephasing from the PSD matrix Gamma
/// (diagonalized into Lindblad form).
Superoperator build_liouvillian_reduced(const QubitEnsemble& ensemble,
                                        const CouplingMatrices& couplings);

struct RetainedMode {
  double omega = 0;
  double gamma = 0;
  double nbar = 0;
  Eigen::VectorXd lambda;  // per qubit
  int fock_cutoff = 0;
};

/// Full qubit (x) Fock model used as the oracle for the reduced equation.
Superoperator build_full_model(const QubitEnsemble& ensemble,
                               const std::vector<RetainedMode>& modes);

struct SteadyStateOptions {
  double residual_tol = 1e-10;
  double psd_tol = 1e-6;
  bool check_uniqueness = true;
};

/// Null vector of L normalized to unit trace, via sparse LU with one row
/// replaced by the trace constraint.
DensityMatrix steady_state(const Superoperator& L, const SteadyStateOptions& opts = {});

/// Dense cross-check path: eigenvector of the smallest-magnitude eigenvalue.
DensityMatrix steady_state_dense(const Superoperator& L);

/// Checks that the Fock-cutoff populations of a full-model steady state are
/// converged; returns the worst top-level population.
double fock_cutoff_population(const DensityMatrix& mu, const std::vector<int>& dims,
                              int n_qubits);

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const std::vector<int>& dims,
                               const std::vector<int>& keep);

void write_density_csv(const DensityMatrix& mu, const std::string& path);
void write_density_binary(const DensityMatrix& mu, const std::string& path);
DensityMatrix read_density_binary(const std::string& path);

}  // namespace bnnr
