#include "bnnr/liouville.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <fstream>

namespace bnnr {

double DensityMatrix::hermiticity_defect() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::trace_defect() const { return std::abs(rho.trace() - Complex(1.0)); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::check(double herm_tol, double trace_tol, double psd_tol) const {
  if (hermiticity_defect() > herm_tol) throw SolverError("density matrix not Hermitian");
  if (trace_defect() > trace_tol) throw SolverError("density matrix trace != 1");
  if (min_eigenvalue() < -psd_tol) throw SolverError("density matrix not PSD");
}

Eigen::VectorXcd Superoperator::apply(const Eigen::MatrixXcd& X) const {
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(X.data(), X.size());
  return L * v;
}

double Superoperator::trace_preservation_defect() const {
  // (vec 1)^dag L: sum of rows i*d+i per column.
  Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(L.cols());
  for (int col = 0; col < L.outerSize(); ++col)
    for (SparseC::InnerIterator it(L, col); it; ++it)
      if (it.row() % (dim + 1) == 0) tr(col) += it.value();
  return tr.cwiseAbs().maxCoeff();
}

SparseC identity_op(int d) {
  SparseC I(d, d);
  I.setIdentity();
  return I;
}

SparseC kron(const SparseC& a, const SparseC& b) {
  SparseC out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<size_t>(a.nonZeros()) * b.nonZeros());
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SparseC::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SparseC::InnerIterator ib(b, kb); ib; ++ib)
          trips.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                             ia.value() * ib.value());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SparseC lift(const SparseC& op, int site, const std::vector<int>& dims) {
  SparseC out = identity_op(1);
  for (size_t i = 0; i < dims.size(); ++i)
    out = kron(out, static_cast<int>(i) == site ? op : identity_op(dims[i]));
  return out;
}

SparseC sigma_x() {
  SparseC s(2, 2);
  s.insert(0, 1) = 1.0;
  s.insert(1, 0) = 1.0;
  s.makeCompressed();
  return s;
}

SparseC sigma_y() {
  SparseC s(2, 2);
  s.insert(0, 1) = Complex(0, -1);
  s.insert(1, 0) = Complex(0, 1);
  s.makeCompressed();
  return s;
}

SparseC sigma_z() {
  // |e> = basis state 0, |g> = basis state 1: sz = |e><e| - |g><g|.
  SparseC s(2, 2);
  s.insert(0, 0) = 1.0;
  s.insert(1, 1) = -1.0;
  s.makeCompressed();
  return s;
}

SparseC sigma_minus() {
  // sigma^- = |g><e|
  SparseC s(2, 2);
  s.insert(1, 0) = 1.0;
  s.makeCompressed();
  return s;
}

SparseC annihilation(int cutoff) {
  SparseC a(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  a.makeCompressed();
  return a;
}

SparseC commutator_liouvillian(const SparseC& H) {
  const int d = static_cast<int>(H.rows());
  SparseC I = identity_op(d);
  SparseC Ht = SparseC(H.transpose());
  return Complex(0, -1) * (kron(I, H) - kron(Ht, I));
}

SparseC dissipator(const SparseC& o, double rate) {
  const int d = static_cast<int>(o.rows());
  SparseC I = identity_op(d);
  SparseC odag = SparseC(o.adjoint());
  SparseC oconj = SparseC(o.conjugate());
  SparseC odo = odag * o;
  SparseC odoT = SparseC(odo.transpose());
  return (rate * 0.5) * SparseC(2.0 * kron(oconj, o) - kron(I, odo) - kron(odoT, I));
}

SparseC build_h_eff(const QubitEnsemble& ensemble, const CouplingMatrices& couplings,
                    int max_qubits) {
  const int N = ensemble.size();
  if (N > max_qubits)
    throw std::invalid_argument("qubit count " + std::to_string(N) + " exceeds cap " +
                                std::to_string(max_qubits));
  std::vector<int> dims(N, 2);
  const int d = 1 << N;
  SparseC H(d, d);
  for (int k = 0; k < N; ++k) {
    H = H + SparseC(0.5 * ensemble.qubits[k].detuning * lift(sigma_z(), k, dims)) +
        SparseC(0.5 * ensemble.qubits[k].rabi * lift(sigma_x(), k, dims));
  }
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      if (couplings.G(j, k) == 0.0) continue;
      H = H - SparseC(0.25 * couplings.G(j, k) *
                      SparseC(lift(sigma_z(), j, dims) * lift(sigma_z(), k, dims)));
    }
  H.makeCompressed();
  return H;
}

namespace {

// Collective dephasing in Lindblad form: jump operators from the
// eigendecomposition of Gamma.
SparseC dephasing_block(const Eigen::MatrixXd& Gamma, const std::vector<int>& dims) {
  const int N = static_cast<int>(Gamma.rows());
  const int d2 = 1;
  (void)d2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gamma);
  const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  if (scale > 0 && es.eigenvalues().minCoeff() < -1e-10 * scale)
    throw SolverError("Gamma not PSD: eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  int dtot = 1;
  for (int dd : dims) dtot *= dd;
  SparseC out(dtot * dtot, dtot * dtot);
  for (int a = 0; a < N; ++a) {
    const double wa = std::max(es.eigenvalues()(a), 0.0);
    if (wa == 0.0) continue;
    SparseC A(dtot, dtot);
    for (int k = 0; k < N; ++k)
      A = A + SparseC(es.eigenvectors()(k, a) * lift(sigma_z(), k, dims));
    out = out + dissipator(A, wa);
  }
  return out;
}

}  // namespace

Superoperator build_liouvillian_reduced(const QubitEnsemble& ensemble,
                                        const CouplingMatrices& couplings) {
  const int N = ensemble.size();
  std::vector<int> dims(N, 2);
  const int d = 1 << N;
  SparseC H = build_h_eff(ensemble, couplings);
  SparseC L = commutator_liouvillian(H);
  for (int k = 0; k < N; ++k)
    L = L + dissipator(lift(sigma_minus(), k, dims), ensemble.qubits[k].decay);
  L = L + dephasing_block(couplings.Gamma, dims);
  L.makeCompressed();
  Superoperator out;
  out.L = std::move(L);
  out.dim = d;
  out.dims = dims;
  return out;
}

Superoperator build_full_model(const QubitEnsemble& ensemble,
                               const std::vector<RetainedMode>& modes) {
  const int N = ensemble.size();
  std::vector<int> dims(N, 2);
  long total = 1 << N;
  for (const RetainedMode& m : modes) {
    if (m.fock_cutoff < 2) throw std::invalid_argument("fock cutoff must be >= 2");
    dims.push_back(m.fock_cutoff);
    total *= m.fock_cutoff;
  }
  if (total > 4096) throw std::invalid_argument("full model dimension exceeds 4096");
  const int d = static_cast<int>(total);

  SparseC H(d, d);
  for (int k = 0; k < N; ++k)
    H = H + SparseC(0.5 * ensemble.qubits[k].detuning * lift(sigma_z(), k, dims)) +
        SparseC(0.5 * ensemble.qubits[k].rabi * lift(sigma_x(), k, dims));
  for (size_t m = 0; m < modes.size(); ++m) {
    const int site = N + static_cast<int>(m);
    SparseC a = lift(annihilation(modes[m].fock_cutoff), site, dims);
    SparseC adag = SparseC(a.adjoint());
    SparseC x = a + adag;
    H = H + SparseC(modes[m].omega * SparseC(adag * a));
    for (int k = 0; k < N; ++k) {
      if (modes[m].lambda(k) == 0.0) continue;
      H = H + SparseC(0.5 * modes[m].lambda(k) * SparseC(lift(sigma_z(), k, dims) * x));
    }
  }

  SparseC L = commutator_liouvillian(H);
  for (int k = 0; k < N; ++k)
    L = L + dissipator(lift(sigma_minus(), k, dims), ensemble.qubits[k].decay);
  for (size_t m = 0; m < modes.size(); ++m) {
    const int site = N + static_cast<int>(m);
    SparseC a = lift(annihilation(modes[m].fock_cutoff), site, dims);
    SparseC adag = SparseC(a.adjoint());
    L = L + dissipator(a, modes[m].gamma * (modes[m].nbar + 1.0));
    if (modes[m].nbar > 0) L = L + dissipator(adag, modes[m].gamma * modes[m].nbar);
  }
  L.makeCompressed();
  Superoperator out;
  out.L = std::move(L);
  out.dim = d;
  out.dims = dims;
  return out;
}

namespace {

DensityMatrix solve_with_trace_row(const Superoperator& sop, int replaced_row) {
  const int d = sop.dim;
  const int d2 = d * d;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(sop.L.nonZeros() + d);
  for (int col = 0; col < sop.L.outerSize(); ++col)
    for (SparseC::InnerIterator it(sop.L, col); it; ++it)
      if (it.row() != replaced_row) trips.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < d; ++i) trips.emplace_back(replaced_row, i * d + i, Complex(1.0));
  SparseC M(d2, d2);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();

  Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw SolverError("steady_state: sparse LU factorization failed");
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(d2);
  b(replaced_row) = 1.0;
  Eigen::VectorXcd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SolverError("steady_state: solve failed");

  DensityMatrix mu;
  mu.rho = Eigen::Map<Eigen::MatrixXcd>(x.data(), d, d);
  mu.dims = sop.dims;
  mu.rho = 0.5 * (mu.rho + mu.rho.adjoint().eval());
  mu.rho /= mu.rho.trace().real();
  return mu;
}

}  // namespace

DensityMatrix steady_state(const Superoperator& sop, const SteadyStateOptions& opts) {
  const int d = sop.dim;
  DensityMatrix mu = solve_with_trace_row(sop, 0);

  const double lnorm = sop.L.coeffs().cwiseAbs().maxCoeff();
  const double residual = sop.apply(mu.rho).norm() / (lnorm * mu.rho.norm());
  if (residual > opts.residual_tol)
    throw SolverError("steady_state: residual " + std::to_string(residual) + " above tolerance");

  if (opts.check_uniqueness) {
    DensityMatrix mu2 = solve_with_trace_row(sop, d * d - 1);
    if ((mu.rho - mu2.rho).cwiseAbs().maxCoeff() > 1e-6)
      throw SolverError("steady_state: degenerate steady-state manifold (rank deficiency >= 2)");
  }

  const double min_ev = mu.min_eigenvalue();
  if (min_ev < -opts.psd_tol)
    throw SolverError("steady_state: solution not PSD (min eigenvalue " + std::to_string(min_ev) +
                      ")");
  return mu;
}

DensityMatrix steady_state_dense(const Superoperator& sop) {
  const int d = sop.dim;
  if (static_cast<long>(d) * d > 65536)
    throw std::invalid_argument("dense path limited to d^2 <= 65536");
  Eigen::MatrixXcd Ld(sop.L);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Ld);
  int best = 0;
  for (int i = 1; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(best))) best = i;
  Eigen::VectorXcd v = es.eigenvectors().col(best);
  DensityMatrix mu;
  mu.rho = Eigen::Map<Eigen::MatrixXcd>(v.data(), d, d);
  mu.dims = sop.dims;
  mu.rho = 0.5 * (mu.rho + mu.rho.adjoint().eval());
  mu.rho /= mu.rho.trace().real();
  return mu;
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const std::vector<int>& dims,
                               const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  std::vector<bool> keep_mask(n, false);
  for (int k : keep) keep_mask[k] = true;
  int dk = 1, dt = 1;
  for (int i = 0; i < n; ++i) (keep_mask[i] ? dk : dt) *= dims[i];

  // Index helpers: row-major style decomposition consistent with kron order.
  std::vector<int> strides(n);
  int acc = 1;
  for (int i = n - 1; i >= 0; --i) {
    strides[i] = acc;
    acc *= dims[i];
  }
  auto compose = [&](const std::vector<int>& idx) {
    int v = 0;
    for (int i = 0; i < n; ++i) v += idx[i] * strides[i];
    return v;
  };

  (void)dt;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  std::vector<int> kept, traced;
  for (int i = 0; i < n; ++i) (keep_mask[i] ? kept : traced).push_back(i);

  auto enumerate = [&](const std::vector<int>& sites, int combined, std::vector<int>& idx) {
    for (int s = static_cast<int>(sites.size()) - 1; s >= 0; --s) {
      idx[sites[s]] = combined % dims[sites[s]];
      combined /= dims[sites[s]];
    }
  };

  const int nt = [&] {
    int v = 1;
    for (int s : traced) v *= dims[s];
    return v;
  }();
  for (int r = 0; r < dk; ++r) {
    for (int c = 0; c < dk; ++c) {
      std::vector<int> ridx(n, 0), cidx(n, 0);
      enumerate(kept, r, ridx);
      enumerate(kept, c, cidx);
      Complex sum = 0;
      for (int t = 0; t < nt; ++t) {
        enumerate(traced, t, ridx);
        enumerate(traced, t, cidx);
        sum += rho(compose(ridx), compose(cidx));
      }
      out(r, c) = sum;
    }
  }
  return out;
}

double fock_cutoff_population(const DensityMatrix& mu, const std::vector<int>& dims,
                              int n_qubits) {
  double worst = 0.0;
  for (size_t m = n_qubits; m < dims.size(); ++m) {
    Eigen::MatrixXcd r = partial_trace(mu.rho, dims, {static_cast<int>(m)});
    worst = std::max(worst, r(dims[m] - 1, dims[m] - 1).real());
  }
  return worst;
}

void write_density_csv(const DensityMatrix& mu, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  out << "row,col,re,im\n";
  for (int i = 0; i < mu.dim(); ++i)
    for (int j = 0; j < mu.dim(); ++j)
      out << i << ',' << j << ',' << mu.rho(i, j).real() << ',' << mu.rho(i, j).imag() << '\n';
}

void write_density_binary(const DensityMatrix& mu, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const char magic[8] = {'B', 'N', 'R', 'D', 'M', '0', '0', '1'};
  out.write(magic, 8);
  int32_t nsub = static_cast<int32_t>(mu.dims.size());
  out.write(reinterpret_cast<const char*>(&nsub), 4);
  for (int dd : mu.dims) {
    int32_t v = dd;
    out.write(reinterpret_cast<const char*>(&v), 4);
  }
  int32_t d = mu.dim();
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(mu.rho.data()), sizeof(Complex) * d * d);
}

DensityMatrix read_density_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::string(magic, 8) != "BNRDM001") throw std::runtime_error("bad density dump header");
  int32_t nsub;
  in.read(reinterpret_cast<char*>(&nsub), 4);
  DensityMatrix mu;
  mu.dims.resize(nsub);
  for (int i = 0; i < nsub; ++i) {
    int32_t v;
    in.read(reinterpret_cast<char*>(&v), 4);
    mu.dims[i] = v;
  }
  int32_t d;
  in.read(reinterpret_cast<char*>(&d), 4);
  mu.rho.resize(d, d);
  in.read(reinterpret_cast<char*>(mu.rho.data()), sizeof(Complex) * d * d);
  return mu;
}

}  // namespace bnnr
