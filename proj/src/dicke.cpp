#include "bnnr/dicke.hpp"

#include <cmath>
#include <limits>

namespace bnnr {

void DickeConfig::validate() const {
  const int N = ensemble.size();
  if (N < 1) throw std::invalid_argument("need at least one qubit");
  if (lambda.size() != N) throw std::invalid_argument("lambda size mismatch");
  if (!(omega > 0) || !(gamma > 0)) throw std::invalid_argument("omega, gamma must be positive");
  if (residual_G.rows() != N || residual_Gamma.rows() != N)
    throw std::invalid_argument("residual coupling size mismatch");
  if (tolerance <= 0 || max_iterations < 1) throw std::invalid_argument("bad iteration controls");
}

std::complex<double> order_parameter_from_spins(const Eigen::VectorXd& lambda,
                                                const Eigen::VectorXd& sz, double omega,
                                                double gamma) {
  if (!(omega > 0)) throw std::invalid_argument("omega must be positive");
  const double num = lambda.dot(sz);
  return num / std::complex<double>(-2.0 * omega, gamma);
}

namespace {

Eigen::VectorXd steady_sz(const DickeConfig& cfg, double re_a) {
  QubitEnsemble shifted = cfg.ensemble;
  for (int k = 0; k < shifted.size(); ++k)
    shifted.qubits[k].detuning += 2.0 * cfg.lambda(k) * re_a;
  CouplingMatrices cm;
  cm.G = cfg.residual_G;
  cm.Gamma = cfg.residual_Gamma;
  cm.n_max = 0;
  Superoperator L = build_liouvillian_reduced(shifted, cm);
  SteadyStateOptions opts;
  opts.check_uniqueness = false;  // interior of the iteration; checked on entry
  DensityMatrix mu = steady_state(L, opts);
  std::vector<int> dims(shifted.size(), 2);
  Eigen::VectorXd sz(shifted.size());
  for (int k = 0; k < shifted.size(); ++k) {
    Eigen::MatrixXcd rk = partial_trace(mu.rho, dims, {k});
    sz(k) = (rk(0, 0) - rk(1, 1)).real();
  }
  return sz;
}

}  // namespace

FixedPointTrace dicke_fixed_point(const DickeConfig& config) {
  config.validate();
  const int N = config.ensemble.size();
  FixedPointTrace trace;
  std::complex<double> a = config.initial_guess;
  double eta = config.damping;
  trace.iterates.push_back(a);

  double prev_eps = std::numeric_limits<double>::infinity();
  int rises = 0;
  for (int it = 0; it < config.max_iterations; ++it) {
    trace.sz = steady_sz(config, a.real());
    std::complex<double> a_new =
        order_parameter_from_spins(config.lambda, trace.sz, config.omega, config.gamma);
    a_new = (1.0 - eta) * a + eta * a_new;
    const double denom = std::abs(a_new) + std::abs(a);
    const double eps = denom > 0 ? std::abs(std::abs(a_new) - std::abs(a)) / denom : 0.0;
    trace.iterates.push_back(a_new);
    trace.rel_errors.push_back(eps);
    a = a_new;
    if (eps < config.tolerance) {
      trace.converged = true;
      break;
    }
    // Oscillation handling: persistent growth of the relative error
    // indicates a period-2 cycle; halve the mixing.
    if (eps > prev_eps) {
      if (++rises >= 4) {
        eta *= 0.5;
        rises = 0;
        if (eta < 1.0 / 64.0) break;
      }
    } else {
      rises = 0;
    }
    prev_eps = eps;
  }
  if (!trace.converged && trace.rel_errors.size() >= 4) {
    // Period-2 detector on |a|.
    const auto& xs = trace.iterates;
    const size_t n = xs.size();
    const double d2 = std::abs(std::abs(xs[n - 1]) - std::abs(xs[n - 3]));
    const double d1 = std::abs(std::abs(xs[n - 1]) - std::abs(xs[n - 2]));
    trace.limit_cycle = d2 < 0.01 * d1;
  }
  trace.a = a;
  trace.order_parameter = std::abs(a) / std::sqrt(static_cast<double>(N));
  return trace;
}

CriticalCouplings analytic_critical(int n_qubits, double omega, double gamma, double Omega,
                                    double G, double Gamma_diag, double kappa) {
  if (!(Omega > 0)) throw std::invalid_argument("Omega must be positive");
  CriticalCouplings out;
  const double half = 0.5 * Gamma_diag + 2.0 * kappa;
  const double num = (0.25 * gamma * gamma + omega * omega) *
                     (half * half + Omega * Omega - 0.5 * G * Omega);
  const double den = n_qubits * omega * Omega;
  const double rad = num / den;
  if (rad < 0) {
    out.always_superradiant = true;
  } else {
    out.lambda_c = std::sqrt(rad);
  }
  out.lambda_c0 = std::sqrt(omega * (4.0 * kappa * kappa + Omega * Omega) / (n_qubits * Omega));
  return out;
}

PhaseScanResult phase_scan(DickeConfig config, const std::vector<double>& lambda_grid,
                           double threshold) {
  PhaseScanResult result;
  const int N = config.ensemble.size();

  auto run_once = [&](double lam, std::complex<double> guess) {
    DickeConfig c = config;
    c.lambda = Eigen::VectorXd::Constant(N, lam);
    c.initial_guess = guess;
    return dicke_fixed_point(c);
  };

  // The static self-consistency map is bistable above the transition and
  // its normal-branch amplitude is nonzero (it grows with kappa^2 lam), so
  // neither warm-started continuation nor an absolute amplitude cut can
  // locate the onset robustly. Each point instead runs two fixed starts -
  // the normal scale (a = 0) and the superradiant scale N lam / (2 omega) -
  // and the superradiant phase is declared where the converged branches
  // separate: the upper branch exceeds both the absolute threshold and a
  // fixed multiple of the lower one.
  constexpr double kBranchFactor = 3.0;
  struct PointEval {
    FixedPointTrace norm, sr;
    bool superradiant = false;
  };
  auto eval_at = [&](double lam) {
    PointEval e;
    e.norm = run_once(lam, {0.0, 0.0});
    e.sr = run_once(lam, {N * lam / (2.0 * config.omega), 0.0});
    e.superradiant = e.norm.converged && e.sr.converged &&
                     e.sr.order_parameter > threshold &&
                     e.sr.order_parameter > kBranchFactor * e.norm.order_parameter;
    return e;
  };

  std::optional<double> below, above;
  for (size_t i = 0; i < lambda_grid.size(); ++i) {
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
      throw std::invalid_argument("lambda grid must be strictly increasing");
    PointEval e = eval_at(lambda_grid[i]);
    const FixedPointTrace& t = e.superradiant ? e.sr : e.norm;
    PhaseScanPoint p;
    p.lambda = lambda_grid[i];
    p.order_parameter = t.order_parameter;
    p.iterations = static_cast<int>(t.rel_errors.size());
    p.converged = t.converged;
    result.points.push_back(p);
    if (t.converged) {
      if (!e.superradiant) {
        if (!above) below = lambda_grid[i];
      } else if (!above) {
        above = lambda_grid[i];
      }
    }
  }

  if (below && above && *below < *above) {
    double lo = *below, hi = *above;
    for (int it = 0; it < 30 && (hi - lo) > 1e-4 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (eval_at(mid).superradiant)
        hi = mid;
      else
        lo = mid;
    }
    result.critical_lambda = 0.5 * (lo + hi);
  } else if (above) {
    result.critical_lambda = *above;
  }
  return result;
}

}  // namespace bnnr
