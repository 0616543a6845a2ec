#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnnr {

enum class BoundaryModel { Clamped, Pinned };

std::string to_string(BoundaryModel m);

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Geometry and material constants of the ribbon plus global environment.
/// All quantities SI; deformation_susceptibility in rad/s per unit strain.
struct DeviceConfig {
  double length = 1e-6;               // L (m)
  double width = 3e-9;                // w (m)
  double thickness = 9.5e-10;         // h (m)
  double mass_density = 2100.0;       // rho_B (kg/m^3)
  double youngs_modulus = 850e9;      // E (Pa)
  double poisson_ratio = 0.211;       // sigma
  double built_in_tension = 0.0;      // T (N/m), pinned branch only
  double quality_factor = 5e5;        // Q
  double deformation_susceptibility = 0.0;  // Xi (rad/s per strain)
  double temperature = 0.0;           // T_K (K)
  BoundaryModel boundary_model = BoundaryModel::Clamped;
  int grid_points = 2048;

  double bending_rigidity() const {
    return youngs_modulus * thickness * thickness * thickness /
           (12.0 * (1.0 - poisson_ratio * poisson_ratio));
  }
  double areal_density() const { return mass_density * thickness; }
  void validate() const;
};

/// One flexural normal mode.
struct Mode {
  int index = 0;           // 1-based
  double eigen_param = 0;  // alpha_n (clamped) or beta_n = n*pi (pinned)
  double omega = 0;        // rad/s
  double gamma = 0;        // omega/Q
  double effective_mass = 0;  // kg
  double x_zp = 0;         // zero-point amplitude (m)
};

/// Flexural mode family of a device: analytic profiles plus a cached
/// uniform grid over [0, L] used for quadrature.
class ModeSpectrum {
 public:
  ModeSpectrum(DeviceConfig device, int n_max);

  const DeviceConfig& device() const { return device_; }
  BoundaryModel boundary_model() const { return device_.boundary_model; }
  int n_max() const { return static_cast<int>(modes_.size()); }
  const Mode& mode(int n) const;  // 1-based
  const std::vector<Mode>& modes() const { return modes_; }

  /// Profile and its derivative at physical position z, evaluated from the
  /// closed forms. psi dimensionless with unit maximum; dpsi in 1/m.
  double psi(int n, double z) const;
  double dpsi(int n, double z) const;

  /// Cached uniform grid of the profiles, grid_points samples over [0, L].
  const Eigen::VectorXd& grid() const { return grid_; }
  const Eigen::VectorXd& psi_samples(int n) const;
  const Eigen::VectorXd& dpsi_samples(int n) const;

  void write_csv(const std::string& path) const;

 private:
  DeviceConfig device_;
  std::vector<Mode> modes_;
  std::vector<double> norms_;  // N_n, clamped branch
  Eigen::VectorXd grid_;
  std::vector<Eigen::VectorXd> psi_grid_, dpsi_grid_;
};

/// First n_max positive roots of cos(a)*cosh(a) = 1, solved in the stable
/// form cos(a) - sech(a) = 0.
std::vector<double> clamped_alphas(int n_max);

/// Sampled profile and derivative of mode n on the device grid.
struct ModeProfile {
  Eigen::VectorXd z;
  Eigen::VectorXd psi;
  Eigen::VectorXd dpsi;
};
ModeProfile mode_profile(int n, const DeviceConfig& device);

/// Full spectrum with frequencies, masses and zero-point amplitudes.
ModeSpectrum mode_frequencies(const DeviceConfig& device, int n_max);

/// Simpson quadrature on a uniformly sampled integrand (odd or even count).
double simpson(const Eigen::VectorXd& f, double dx);

}  // namespace bnnr
