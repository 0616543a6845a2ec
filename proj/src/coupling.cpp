#include "bnnr/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bnnr/constants.hpp"

namespace bnnr {

std::vector<std::string> QubitEnsemble::validate(double length) const {
  std::vector<std::string> warnings;
  for (int k = 0; k < size(); ++k) {
    const Qubit& q = qubits[k];
    if (!(q.position > 0 && q.position < length))
      throw std::invalid_argument("qubit " + std::to_string(k) + " position outside (0, L)");
    if (q.decay < 0)
      throw std::invalid_argument("qubit " + std::to_string(k) + " decay must be non-negative");
  }
  for (int j = 0; j < size(); ++j)
    for (int k = j + 1; k < size(); ++k)
      if (std::abs(qubits[j].position - qubits[k].position) < length / 1000.0)
        warnings.push_back("qubits " + std::to_string(j) + " and " + std::to_string(k) +
                           " closer than L/1000");
  return warnings;
}

double coupling_rate(const ModeSpectrum& spectrum, int n, double z) {
  const DeviceConfig& dev = spectrum.device();
  if (!(z > 0 && z < dev.length)) throw std::invalid_argument("position outside (0, L)");
  const Mode& m = spectrum.mode(n);
  const double dp = spectrum.dpsi(n, z);
  return 0.5 * dev.deformation_susceptibility * m.x_zp * m.x_zp * dp * dp;
}

double thermal_occupation(double omega, double temperature_K) {
  if (!(omega > 0)) throw std::invalid_argument("omega must be positive");
  if (temperature_K < 0) throw std::invalid_argument("temperature must be >= 0");
  if (temperature_K == 0) return 0.0;
  const double x = hbar * omega / (k_B * temperature_K);
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

std::complex<double> bath_correlator(const Mode& mode, double temperature_K) {
  const double nbar = thermal_occupation(mode.omega, temperature_K);
  const double denom = 0.25 * mode.gamma * mode.gamma + mode.omega * mode.omega;
  return {mode.gamma * (nbar + 0.5) / denom, mode.omega / denom};
}

namespace {

struct Kahan {
  double sum = 0, c = 0;
  void add(double v) {
    double y = v - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

CouplingMatrices effective_matrices(const QubitEnsemble& ensemble, const ModeSpectrum& spectrum,
                                    std::optional<int> excluded_mode) {
  const int N = ensemble.size();
  const int M = spectrum.n_max();
  if (excluded_mode && (*excluded_mode < 1 || *excluded_mode > M))
    throw std::invalid_argument("excluded mode outside spectrum");
  ensemble.validate(spectrum.device().length);

  CouplingMatrices cm;
  cm.n_max = M;
  cm.excluded_mode = excluded_mode;
  cm.temperature = spectrum.device().temperature;
  cm.lambda.resize(N, M);
  for (int k = 0; k < N; ++k)
    for (int m = 0; m < M; ++m)
      cm.lambda(k, m) = coupling_rate(spectrum, m + 1, ensemble.qubits[k].position);

  cm.G.setZero(N, N);
  cm.Gamma.setZero(N, N);
  const int tail_start = std::min(M - 1, (9 * M) / 10);  // last ~10% of modes
  double tail_abs = 0, total_abs = 0;
  for (int j = 0; j < N; ++j) {
    for (int k = j; k < N; ++k) {
      Kahan g, gam;
      for (int m = 0; m < M; ++m) {
        if (excluded_mode && m + 1 == *excluded_mode) continue;
        const std::complex<double> c = bath_correlator(spectrum.mode(m + 1), cm.temperature);
        const double ll = cm.lambda(j, m) * cm.lambda(k, m);
        const double gterm = ll * c.imag();
        const double gamterm = 0.5 * ll * c.real();
        g.add(gterm);
        gam.add(gamterm);
        total_abs += std::abs(gterm);
        if (m >= tail_start) tail_abs += std::abs(gterm);
      }
      cm.G(j, k) = cm.G(k, j) = g.sum;
      cm.Gamma(j, k) = cm.Gamma(k, j) = gam.sum;
    }
  }
  cm.tail_fraction = total_abs > 0 ? tail_abs / total_abs : 0.0;
  cm.truncation_warning = cm.tail_fraction > 0.01;
  return cm;
}

std::vector<double> equal_strain_positions(const ModeSpectrum& spectrum, int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
  const int mode = n_qubits + 1;
  if (mode > spectrum.n_max()) throw std::invalid_argument("spectrum too small for mode N+1");
  const double L = spectrum.device().length;

  // Dense scan of [psi']^2 for interior local maxima.
  const int pts = 100000;
  std::vector<double> zs(pts + 1), s2(pts + 1);
  for (int i = 0; i <= pts; ++i) {
    zs[i] = L * static_cast<double>(i) / pts;
    double z = std::min(std::max(zs[i], 1e-12 * L), (1.0 - 1e-12) * L);
    double dp = spectrum.dpsi(mode, z);
    s2[i] = dp * dp;
  }
  struct Peak {
    double z, lambda;
  };
  std::vector<Peak> peaks;
  for (int i = 1; i < pts; ++i) {
    if (s2[i] > s2[i - 1] && s2[i] >= s2[i + 1]) {
      // Parabolic refinement.
      double d = (s2[i - 1] - s2[i + 1]) / (2.0 * (s2[i - 1] - 2.0 * s2[i] + s2[i + 1]));
      double z = zs[i] + d * (zs[1] - zs[0]);
      z = std::min(std::max(z, 1e-9 * L), (1.0 - 1e-9) * L);
      peaks.push_back({z, coupling_rate(spectrum, mode, z)});
    }
  }
  if (peaks.empty()) throw SolverError("equal_strain_positions: no interior maxima found");

  // Select the largest family of pairwise-equal couplings. The interior
  // maxima agree to ~3% for low modes (boundary layers perturb the heights),
  // while the two boundary peaks sit ~50% lower, so a 5% window separates
  // them cleanly.
  std::vector<double> best;
  for (const Peak& ref : peaks) {
    std::vector<double> family;
    for (const Peak& p : peaks)
      if (std::abs(p.lambda - ref.lambda) <= 5e-2 * std::max(p.lambda, ref.lambda))
        family.push_back(p.z);
    if (family.size() > best.size()) best = family;
  }
  if (static_cast<int>(best.size()) < n_qubits)
    throw SolverError("equal_strain_positions: mode " + std::to_string(mode) + " supports only " +
                      std::to_string(best.size()) + " equal-strain maxima, need " +
                      std::to_string(n_qubits));
  std::sort(best.begin(), best.end());
  best.resize(n_qubits);
  return best;
}

void write_couplings_csv(const CouplingMatrices& cm, const DeviceConfig& device,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  out << "# geometry: L=" << device.length << " w=" << device.width << " h=" << device.thickness
      << " boundary=" << to_string(device.boundary_model) << '\n';
  out << "# temperature_K=" << cm.temperature << " n_max=" << cm.n_max << " excluded_mode="
      << (cm.excluded_mode ? std::to_string(*cm.excluded_mode) : std::string("none")) << '\n';
  out << "# tail_fraction=" << cm.tail_fraction << '\n';
  const int N = static_cast<int>(cm.G.rows());
  out << "j,k,G_rad_s,Gamma_rad_s\n";
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) out << j << ',' << k << ',' << cm.G(j, k) << ',' << cm.Gamma(j, k) << '\n';
  out << "k,n,lambda_rad_s\n";
  for (int k = 0; k < N; ++k)
    for (int n = 0; n < cm.n_max; ++n) out << k << ',' << n + 1 << ',' << cm.lambda(k, n) << '\n';
}

}  // namespace bnnr
