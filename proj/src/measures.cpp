#include "bnnr/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "bnnr/liouville.hpp"

namespace bnnr {

namespace {

int bit(int value, int pos) { return (value >> pos) & 1; }

// Site k of N qubits occupies bit (N-1-k) of the kron-ordered index.
int site_bit(int n_qubits, int site) { return n_qubits - 1 - site; }

}  // namespace

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& rho, int n_qubits,
                                   const std::vector<int>& subset_a) {
  const int d = 1 << n_qubits;
  if (rho.rows() != d) throw std::invalid_argument("dimension mismatch");
  if (subset_a.empty() || static_cast<int>(subset_a.size()) >= n_qubits)
    throw std::invalid_argument("partition must be a non-empty proper subset");
  int mask = 0;
  for (int s : subset_a) {
    if (s < 0 || s >= n_qubits) throw std::invalid_argument("invalid qubit index");
    mask |= 1 << site_bit(n_qubits, s);
  }
  Eigen::MatrixXcd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const int it = (i & ~mask) | (j & mask);
      const int jt = (j & ~mask) | (i & mask);
      out(it, jt) = rho(i, j);
    }
  return out;
}

double log_negativity(const Eigen::MatrixXcd& rho, int n_qubits,
                      const std::vector<int>& subset_a) {
  Eigen::MatrixXcd pt = partial_transpose(rho, n_qubits, subset_a);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pt);
  const double trace_norm = svd.singularValues().sum();
  return std::log2(std::max(trace_norm, 1.0));
}

double concurrence(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != 4) throw std::invalid_argument("concurrence needs a two-qubit state");
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // sigma_y (x) sigma_y
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  Eigen::Matrix4cd R = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(R);
  std::array<double, 4> s;
  for (int i = 0; i < 4; ++i) s[i] = std::sqrt(std::max(es.eigenvalues()(i).real(), 0.0));
  std::sort(s.begin(), s.end(), std::greater<>());
  return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

namespace {

double pure_state_tangle(const Eigen::VectorXcd& psi, int n_qubits, int focus) {
  // rho_focus from the pure state; tau = 4 det(rho_focus).
  const int d = static_cast<int>(psi.size());
  const int fb = site_bit(n_qubits, focus);
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < d; ++i)
    for (int v = 0; v < 2; ++v) {
      const int j = (i & ~(1 << fb)) | (v << fb);
      r(bit(i, fb), v) += psi(i) * std::conj(psi(j));
    }
  return std::max(0.0, 4.0 * (r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0)).real());
}

double roof_estimate_once(const Eigen::MatrixXcd& rho, int n_qubits, int focus, int samples,
                          std::mt19937_64& rng) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  std::vector<int> support;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-12) support.push_back(i);
  const int r = static_cast<int>(support.size());
  if (r == 1) {
    return pure_state_tangle(es.eigenvectors().col(support[0]), n_qubits, focus);
  }
  Eigen::MatrixXcd root(rho.rows(), r);
  for (int i = 0; i < r; ++i)
    root.col(i) = std::sqrt(es.eigenvalues()(support[i])) * es.eigenvectors().col(support[i]);

  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m = r + 2;  // a few extra decomposition elements help the roof
  // The eigendecomposition itself is a valid candidate and is exactly
  // optimal when the state is a mixture of product eigenvectors.
  double best = 0;
  for (int i = 0; i < r; ++i)
    best += es.eigenvalues()(support[i]) *
            pure_state_tangle(es.eigenvectors().col(support[i]), n_qubits, focus);
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXcd g(m, r);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < r; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd iso = qr.householderQ() * Eigen::MatrixXcd::Identity(m, r);
    // Decomposition elements |phi_j> = sum_i iso(j,i) root_i.
    Eigen::MatrixXcd phis = root * iso.transpose();  // d x m
    double avg = 0;
    for (int j = 0; j < m; ++j) {
      const double p = phis.col(j).squaredNorm();
      if (p < 1e-14) continue;
      avg += p * pure_state_tangle(phis.col(j) / std::sqrt(p), n_qubits, focus);
    }
    best = std::min(best, avg);
  }
  return best;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RoofEstimate tangle_one_vs_rest(const Eigen::MatrixXcd& rho, int n_qubits, int focus,
                                const RoofOptions& opts) {
  RoofEstimate out;
  const double purity = (rho * rho).trace().real();
  if (purity > 1.0 - 1e-10) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    Eigen::Index top;
    es.eigenvalues().maxCoeff(&top);
    out.value = pure_state_tangle(es.eigenvectors().col(top), n_qubits, focus);
    return out;
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int rep = 0; rep < opts.repeats; ++rep) {
    std::mt19937_64 rng(splitmix64(opts.seed + 0x100 * rep + focus));
    double v = roof_estimate_once(rho, n_qubits, focus, opts.samples, rng);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.value = lo;
  out.spread = hi - lo;
  out.low_confidence = out.spread > opts.spread_tol;
  return out;
}

namespace {

// Reduced state of the qubits in mask (bitmask over sites).
Eigen::MatrixXcd reduce_to_mask(const Eigen::MatrixXcd& rho, int n_qubits, int mask) {
  std::vector<int> keep;
  for (int s = 0; s < n_qubits; ++s)
    if (mask & (1 << s)) keep.push_back(s);
  std::vector<int> dims(n_qubits, 2);
  return partial_trace(rho, dims, keep);
}

struct ResidualEngine {
  const Eigen::MatrixXcd& rho;
  int n_qubits;
  RoofOptions opts;
  std::map<std::pair<int, int>, RoofEstimate> cache;  // (focus, mask) -> residual

  RoofEstimate residual(int focus, int mask) {
    auto key = std::make_pair(focus, mask);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    RoofEstimate res;
    const int size = __builtin_popcount(mask);
    if (size == 2) {
      Eigen::MatrixXcd r2 = reduce_to_mask(rho, n_qubits, mask);
      // Wootters formula is exact here.
      const double c = concurrence(r2);
      res.value = c * c;
    } else {
      Eigen::MatrixXcd rs = reduce_to_mask(rho, n_qubits, mask);
      // Focus position inside the subset (ascending site order).
      int local_focus = 0;
      for (int s = 0; s < focus; ++s)
        if (mask & (1 << s)) ++local_focus;
      RoofEstimate tau = tangle_one_vs_rest(rs, size, local_focus, opts);
      res = tau;
      // Subtract residuals of all proper sub-subsets containing the focus.
      const int others = mask & ~(1 << focus);
      for (int sub = (others - 1) & others; sub > 0; sub = (sub - 1) & others) {
        RoofEstimate lower = residual(focus, sub | (1 << focus));
        res.value -= lower.value;
        res.spread += lower.spread;
      }
      res.low_confidence = res.spread > opts.spread_tol;
    }
    cache[key] = res;
    return res;
  }
};

}  // namespace

GmeResult gme_residual(const Eigen::MatrixXcd& rho, int n_qubits, const RoofOptions& opts) {
  if (n_qubits < 2 || n_qubits > 7) throw std::invalid_argument("gme_residual supports 2..7 qubits");
  if (rho.rows() != (1 << n_qubits)) throw std::invalid_argument("dimension mismatch");
  const int full = (1 << n_qubits) - 1;
  ResidualEngine engine{rho, n_qubits, opts, {}};
  GmeResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (int f = 0; f < n_qubits; ++f) {
    RoofEstimate r = engine.residual(f, full);
    if (r.value < out.value) {
      out.value = r.value;
      out.spread = r.spread;
      out.low_confidence = r.low_confidence;
      out.best_focus = f;
    }
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

Eigen::MatrixXcd collective_spin(int n_qubits, char axis) {
  std::vector<int> dims(n_qubits, 2);
  SparseC s;
  switch (axis) {
    case 'x': s = sigma_x(); break;
    case 'y': s = sigma_y(); break;
    case 'z': s = sigma_z(); break;
    default: throw std::invalid_argument("axis must be x, y or z");
  }
  SparseC J(1 << n_qubits, 1 << n_qubits);
  for (int k = 0; k < n_qubits; ++k) J = J + SparseC(0.5 * lift(s, k, dims));
  return Eigen::MatrixXcd(J);
}

double qfi(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& observable, double eigen_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const Eigen::VectorXd lam = es.eigenvalues();
  Eigen::MatrixXcd O = es.eigenvectors().adjoint() * observable * es.eigenvectors();
  const int d = static_cast<int>(lam.size());
  double F = 0;
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      const double sum = lam(k) + lam(l);
      if (sum <= eigen_cutoff) continue;
      const double diff = lam(k) - lam(l);
      F += 2.0 * std::norm(O(k, l)) * diff * diff / sum;
    }
  return F;
}

QFIResult qfi_optimal(const Eigen::MatrixXcd& rho, int n_qubits, double eigen_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  const Eigen::VectorXd lam = es.eigenvalues();
  const int d = static_cast<int>(lam.size());
  std::array<Eigen::MatrixXcd, 3> J = {collective_spin(n_qubits, 'x'),
                                       collective_spin(n_qubits, 'y'),
                                       collective_spin(n_qubits, 'z')};
  for (auto& j : J) j = (es.eigenvectors().adjoint() * j * es.eigenvectors()).eval();

  Eigen::Matrix3d F = Eigen::Matrix3d::Zero();
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      const double sum = lam(k) + lam(l);
      if (sum <= eigen_cutoff) continue;
      const double diff = lam(k) - lam(l);
      const double w = 2.0 * diff * diff / sum;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) F(a, b) += w * (J[a](k, l) * J[b](l, k)).real();
    }
  F = 0.5 * (F + F.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> fs(F);
  QFIResult out;
  out.F_x = F(0, 0);
  out.F_y = F(1, 1);
  out.F_z = F(2, 2);
  out.F_Q = fs.eigenvalues()(2);
  out.mean = out.F_Q / n_qubits;
  out.direction = fs.eigenvectors().col(2);
  if (out.direction.norm() > 0) out.direction.normalize();
  return out;
}

}  // namespace bnnr
