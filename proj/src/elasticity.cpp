#include "bnnr/elasticity.hpp"

#include <cmath>
#include <fstream>

#include "bnnr/constants.hpp"

namespace bnnr {

std::string to_string(BoundaryModel m) {
  return m == BoundaryModel::Clamped ? "clamped" : "pinned";
}

void DeviceConfig::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  pos(length, "length");
  pos(width, "width");
  pos(thickness, "thickness");
  pos(mass_density, "mass_density");
  pos(youngs_modulus, "youngs_modulus");
  pos(quality_factor, "quality_factor");
  if (!(poisson_ratio > 0 && poisson_ratio < 0.5))
    throw std::invalid_argument("poisson_ratio must be in (0, 0.5)");
  if (boundary_model == BoundaryModel::Pinned && !(built_in_tension > 0))
    throw std::invalid_argument("pinned branch requires built_in_tension > 0");
  if (temperature < 0) throw std::invalid_argument("temperature must be >= 0");
  if (grid_points < 3) throw std::invalid_argument("grid_points too small");
}

std::vector<double> clamped_alphas(int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  // cos(a)cosh(a) = 1  <=>  f(a) = cos(a) - sech(a) = 0, stable for large a.
  auto f = [](double a) { return std::cos(a) - 1.0 / std::cosh(a); };
  auto df = [](double a) {
    double sech = 1.0 / std::cosh(a);
    return -std::sin(a) + std::tanh(a) * sech;
  };
  std::vector<double> roots;
  roots.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    // Root n lies near (n + 1/2) pi, inside ((n - 1/2) pi, (n + 3/2) pi).
    double guess = (n + 0.5) * pi;
    double lo = guess - 1.3, hi = guess + 1.3;
    // Expand bracket if needed (only relevant for n = 1).
    while (f(lo) * f(hi) > 0 && hi - lo < 2.0 * pi) {
      lo -= 0.1;
      hi += 0.1;
    }
    if (f(lo) * f(hi) > 0) throw SolverError("clamped_alphas: no bracket for root " + std::to_string(n));
    double a = guess;
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      double fa = f(a);
      if (std::abs(fa) < 1e-14) {
        ok = true;
        break;
      }
      double step = fa / df(a);
      double next = a - step;
      if (next <= lo || next >= hi) {  // fall back to bisection
        if (f(lo) * fa < 0)
          hi = a;
        else
          lo = a;
        next = 0.5 * (lo + hi);
      } else {
        if (f(lo) * fa < 0)
          hi = a;
        else
          lo = a;
      }
      a = next;
    }
    if (!ok && std::abs(f(a)) > 1e-12)
      throw SolverError("clamped_alphas: root " + std::to_string(n) + " did not converge");
    roots.push_back(a);
  }
  return roots;
}

namespace {

// Clamped profile in scaled coordinate u = z/L. The textbook combination
// (cos - cosh)/(cos a - cosh a) - (sin - sinh)/(sin a - sinh a) loses all
// relative accuracy for a*u >~ 40: the interior value is an O(exp(-a u))
// residue of two nearly equal boundary-layer terms. Regrouping the
// exponentials puts the profile in a form where every term is O(1):
//   chi(u) = D2 cos(a u) - D1 sin(a u)
//            - exp(-a(1-u)) (cos a - sin a - exp(-a))
//            - exp(-a u) (1 - exp(-a)(cos a + sin a)),
//   D1 = 1 + exp(-2a) - 2 exp(-a) cos a,  D2 = 1 - exp(-2a) - 2 exp(-a) sin a,
// which equals the textbook form times -2 exp(-a)/(D1 D2) and is stable and
// overflow-free for every mode number.
struct ClampedShape {
  double a;  // alpha_n
  double d1, d2;
  double c_edge;    // cos a - sin a - exp(-a), weight of the u = 1 layer
  double c_origin;  // 1 - exp(-a)(cos a + sin a), weight of the u = 0 layer

  explicit ClampedShape(double alpha) : a(alpha) {
    const double r = std::exp(-a);
    const double ca = std::cos(a), sa = std::sin(a);
    d1 = 1.0 + r * r - 2.0 * r * ca;
    d2 = 1.0 - r * r - 2.0 * r * sa;
    c_edge = ca - sa - r;
    c_origin = 1.0 - r * (ca + sa);
  }

  // Unnormalized profile and du-derivative.
  double value(double u) const {
    return d2 * std::cos(a * u) - d1 * std::sin(a * u) -
           std::exp(-a * (1.0 - u)) * c_edge - std::exp(-a * u) * c_origin;
  }
  double deriv(double u) const {
    return a * (-d2 * std::sin(a * u) - d1 * std::cos(a * u) -
                std::exp(-a * (1.0 - u)) * c_edge + std::exp(-a * u) * c_origin);
  }
};

// Signed normalization: 1 / (value at the global |value| maximum), so the
// normalized profile has unit positive maximum.
double signed_norm_on_grid(const ClampedShape& s, int pts) {
  double best = 0;
  for (int i = 0; i <= pts; ++i) {
    double v = s.value(static_cast<double>(i) / pts);
    if (std::abs(v) > std::abs(best)) best = v;
  }
  if (best == 0) throw SolverError("clamped profile vanished on the grid");
  return 1.0 / best;
}

}  // namespace

double simpson(const Eigen::VectorXd& f, double dx) {
  const Eigen::Index n = f.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * dx * (f[0] + f[1]);
  double s = 0.0;
  Eigen::Index last = n - 1;
  // Composite Simpson needs an even interval count; handle a trailing
  // interval with the trapezoid rule when the count is odd.
  Eigen::Index m = (last % 2 == 0) ? last : last - 1;
  for (Eigen::Index i = 0; i < m; i += 2) s += f[i] + 4.0 * f[i + 1] + f[i + 2];
  s *= dx / 3.0;
  if (m != last) s += 0.5 * dx * (f[last - 1] + f[last]);
  return s;
}

ModeSpectrum::ModeSpectrum(DeviceConfig device, int n_max) : device_(device) {
  device_.validate();
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  const double L = device_.length;
  const int pts = device_.grid_points;
  grid_ = Eigen::VectorXd::LinSpaced(pts, 0.0, L);

  const double rho_h = device_.areal_density();
  const double D = device_.bending_rigidity();

  std::vector<double> alphas;
  if (device_.boundary_model == BoundaryModel::Clamped) alphas = clamped_alphas(n_max);

  modes_.reserve(n_max);
  norms_.assign(n_max, 1.0);
  psi_grid_.reserve(n_max);
  dpsi_grid_.reserve(n_max);

  for (int n = 1; n <= n_max; ++n) {
    Mode m;
    m.index = n;
    if (device_.boundary_model == BoundaryModel::Clamped) {
      const double a = alphas[n - 1];
      m.eigen_param = a;
      ClampedShape shape(a);
      norms_[n - 1] = signed_norm_on_grid(shape, 8 * pts);
    } else {
      m.eigen_param = n * pi;
    }
    modes_.push_back(m);

    Eigen::VectorXd p(pts), dp(pts);
    for (int i = 0; i < pts; ++i) {
      p[i] = psi(n, grid_[i]);
      dp[i] = dpsi(n, grid_[i]);
    }
    psi_grid_.push_back(std::move(p));
    dpsi_grid_.push_back(std::move(dp));
  }

  const double dz = grid_[1] - grid_[0];
  for (int n = 1; n <= n_max; ++n) {
    Mode& m = modes_[n - 1];
    if (device_.boundary_model == BoundaryModel::Clamped) {
      // Wave number from the quadrature k_n^4 = int psi psi'''' / int psi^2
      // (scaled coordinate); psi'''' = (alpha/L)^4 psi analytically.
      const double a = m.eigen_param;
      Eigen::VectorXd psi2 = psi_grid_[n - 1].array().square();
      double ipsi2 = simpson(psi2, dz);
      double ipsipsi4 = std::pow(a / device_.length, 4) * ipsi2;
      if (!(ipsipsi4 > 0)) throw SolverError("mode_frequencies: non-positive quadrature");
      double k = std::pow(ipsipsi4 / ipsi2, 0.25) * device_.length;
      m.omega = std::sqrt(D / rho_h) * std::pow(k / device_.length, 2);
      m.effective_mass = device_.mass_density * device_.thickness * device_.width * ipsi2;
    } else {
      m.omega = std::sqrt(device_.built_in_tension / rho_h) * n * pi / device_.length;
      m.effective_mass = 0.5 * device_.mass_density * device_.thickness * device_.width * device_.length;
    }
    m.gamma = m.omega / device_.quality_factor;
    m.x_zp = std::sqrt(hbar / (2.0 * m.effective_mass * m.omega));
  }
}

const Mode& ModeSpectrum::mode(int n) const {
  if (n < 1 || n > n_max()) throw std::out_of_range("mode index out of range");
  return modes_[n - 1];
}

double ModeSpectrum::psi(int n, double z) const {
  const double u = z / device_.length;
  if (device_.boundary_model == BoundaryModel::Pinned) return std::sin(n * pi * u);
  ClampedShape shape(modes_.at(n - 1).eigen_param);
  return norms_[n - 1] * shape.value(u);
}

double ModeSpectrum::dpsi(int n, double z) const {
  const double u = z / device_.length;
  const double L = device_.length;
  if (device_.boundary_model == BoundaryModel::Pinned)
    return (n * pi / L) * std::cos(n * pi * u);
  ClampedShape shape(modes_.at(n - 1).eigen_param);
  return norms_[n - 1] * shape.deriv(u) / L;
}

const Eigen::VectorXd& ModeSpectrum::psi_samples(int n) const {
  if (n < 1 || n > n_max()) throw std::out_of_range("mode index out of range");
  return psi_grid_[n - 1];
}

const Eigen::VectorXd& ModeSpectrum::dpsi_samples(int n) const {
  if (n < 1 || n > n_max()) throw std::out_of_range("mode index out of range");
  return dpsi_grid_[n - 1];
}

void ModeSpectrum::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "n,alpha_or_beta,omega_rad_s,gamma_rad_s,m_eff_kg,x_zp_m\n";
  out.precision(17);
  for (const Mode& m : modes_) {
    out << m.index << ',' << m.eigen_param << ',' << m.omega << ',' << m.gamma << ','
        << m.effective_mass << ',' << m.x_zp << '\n';
  }
}

ModeProfile mode_profile(int n, const DeviceConfig& device) {
  ModeSpectrum spec(device, n);
  ModeProfile p;
  p.z = spec.grid();
  p.psi = spec.psi_samples(n);
  p.dpsi = spec.dpsi_samples(n);
  return p;
}

ModeSpectrum mode_frequencies(const DeviceConfig& device, int n_max) {
  return ModeSpectrum(device, n_max);
}

}  // namespace bnnr
