#include "eitbec/dark_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "eitbec/rk45.hpp"

namespace eitbec {

namespace {

using Eigen::Matrix3cd;
using Eigen::Vector3cd;
using cplx = std::complex<double>;

constexpr int kModeA = 0;
constexpr int kModeC = 1;
constexpr int kModeP = 2;
constexpr double kHalfPi = std::numbers::pi / 2.0;

double max_abs(const Matrix3cd& m) { return m.cwiseAbs().maxCoeff(); }

// d/dt S = conj(K) S + S K^T, the second-moment form of dv/dt = K v.
struct MomentRhs {
  Matrix3cd Kc;
  Matrix3cd Kt;
  explicit MomentRhs(const Matrix3cd& K) : Kc(K.conjugate()), Kt(K.transpose()) {}
  Matrix3cd operator()(double, const Matrix3cd& S) const { return Kc * S + S * Kt; }
};

struct EigenPropagator {
  Matrix3cd V = Matrix3cd::Identity();
  Matrix3cd Vinv = Matrix3cd::Identity();
  Vector3cd lambda = Vector3cd::Zero();
  double condition = 0.0;

  Matrix3cd at(double t) const {
    Vector3cd phases = (lambda * t).array().exp();
    return V * phases.asDiagonal() * Vinv;
  }
  double max_abs_eigenvalue() const { return lambda.cwiseAbs().maxCoeff(); }
};

EigenPropagator make_propagator(const Matrix3cd& K) {
  Eigen::ComplexEigenSolver<Matrix3cd> es(K);
  EigenPropagator p;
  p.V = es.eigenvectors();
  p.lambda = es.eigenvalues();
  Eigen::JacobiSVD<Matrix3cd> svd(p.V);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  p.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (std::isfinite(p.condition)) p.Vinv = p.V.inverse();
  return p;
}

Matrix3cd propagate_closed_form(const EigenPropagator& prop, const Matrix3cd& S0,
                                double t) {
  const Matrix3cd M = prop.at(t);
  Matrix3cd S = M.conjugate() * S0 * M.transpose();
  return 0.5 * (S + S.adjoint());  // strip round-off asymmetry
}

std::array<double, 3> diag_populations(const Matrix3cd& S, double scale) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    double d = S(i, i).real();
    if (d < 0.0) {
      if (d < -1e-9 * scale) {
        throw NumericsError("moment matrix developed a negative population");
      }
      d = 0.0;
    }
    out[i] = d;
  }
  return out;
}

Matrix3cd rk_segment(const Matrix3cd& S, const Matrix3cd& K, double t0, double t1,
                     double rel_tol, double abs_scale) {
  MomentRhs rhs(K);
  Rk45Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-13 * abs_scale;
  return rk45_integrate(
      [&rhs](double t, const Matrix3cd& y) { return rhs(t, y); }, S, t0, t1, opt,
      [](const Matrix3cd& m) { return max_abs(m); });
}

void check_time_grid(std::span<const double> t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i])) {
      throw std::invalid_argument("time grid entries must be finite and >= 0");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

}  // namespace

CouplingConfig CouplingConfig::from_couplings(double omega, double g_root_N0,
                                              double gamma_A, double gamma_C,
                                              double photon_number) {
  CouplingConfig cfg;
  cfg.omega = omega;
  cfg.g_root_N0 = g_root_N0;
  cfg.gamma_A = gamma_A;
  cfg.gamma_C = gamma_C;
  cfg.photon_number = photon_number;
  cfg.theta = std::atan2(g_root_N0, omega);
  cfg.validate();
  return cfg;
}

CouplingConfig CouplingConfig::from_theta(double theta, double omega_scale,
                                          double gamma_A, double gamma_C,
                                          double photon_number) {
  if (!(theta >= 0.0) || !(theta <= kHalfPi)) {
    throw std::invalid_argument("theta must lie in [0, pi/2]");
  }
  if (!(omega_scale > 0.0)) {
    throw std::invalid_argument("omega_scale must be positive");
  }
  CouplingConfig cfg;
  cfg.gamma_A = gamma_A;
  cfg.gamma_C = gamma_C;
  cfg.photon_number = photon_number;
  cfg.theta = theta;
  if (theta == kHalfPi) {
    // Control field off. The photon sector is decoupled from the dark-state
    // dynamics here, so the probe coupling scale is only a placeholder.
    cfg.omega = 0.0;
    cfg.g_root_N0 = omega_scale;
  } else {
    cfg.omega = omega_scale;
    cfg.g_root_N0 = omega_scale * std::tan(theta);
  }
  cfg.validate();
  return cfg;
}

void CouplingConfig::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
    }
  };
  nonneg(omega, "omega");
  nonneg(g_root_N0, "g_root_N0");
  nonneg(gamma_A, "gamma_A");
  nonneg(gamma_C, "gamma_C");
  nonneg(photon_number, "photon_number");
  if (!(theta >= 0.0) || !(theta <= kHalfPi)) {
    throw std::invalid_argument("theta must lie in [0, pi/2]");
  }
  if (omega == 0.0 && g_root_N0 > 0.0 && std::abs(theta - kHalfPi) > 1e-12) {
    throw std::invalid_argument("omega = 0 with g_root_N0 > 0 requires theta = pi/2");
  }
  if (omega > 0.0 || g_root_N0 > 0.0) {
    const double derived = std::atan2(g_root_N0, omega);
    if (std::abs(theta - derived) > 1e-12) {
      throw std::invalid_argument("theta is inconsistent with g_root_N0/omega");
    }
  }
}

double MomentMatrix::hermiticity_error() const {
  const double scale = std::max(max_abs(S), 1e-300);
  return (S - S.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double MomentMatrix::min_eigenvalue_over_trace() const {
  Eigen::SelfAdjointEigenSolver<Matrix3cd> es(0.5 * (S + S.adjoint()));
  const double tr = std::max(trace(), 1e-300);
  return es.eigenvalues().minCoeff() / tr;
}

void validate_moments(const MomentMatrix& m) {
  if (m.hermiticity_error() > 1e-10) {
    throw NumericsError("moment matrix is not Hermitian within tolerance");
  }
  if (m.min_eigenvalue_over_trace() < -1e-10) {
    throw NumericsError("moment matrix is not positive semidefinite within tolerance");
  }
}

MomentMatrix dark_state_moments(const CouplingConfig& cfg) {
  cfg.validate();
  const double s = std::sin(cfg.theta);
  const double c = std::cos(cfg.theta);
  Vector3cd dark;
  dark << cplx(0.0), cplx(-s), cplx(c);
  MomentMatrix m;
  m.S = cfg.photon_number * dark * dark.adjoint();
  m.time = 0.0;
  return m;
}

Eigen::Matrix3cd drift_matrix(const CouplingConfig& cfg, GammaAPlacement placement) {
  cfg.validate();
  const cplx mi(0.0, -1.0);
  Matrix3cd K = Matrix3cd::Zero();
  K(kModeA, kModeC) = mi * cfg.omega;
  K(kModeA, kModeP) = mi * cfg.g_root_N0;
  K(kModeC, kModeA) = mi * cfg.omega;
  K(kModeC, kModeC) = -0.5 * cfg.gamma_C;
  K(kModeP, kModeA) = mi * cfg.g_root_N0;
  if (placement == GammaAPlacement::photon) {
    K(kModeP, kModeP) = -0.5 * cfg.gamma_A;
  } else {
    K(kModeA, kModeA) = -0.5 * cfg.gamma_A;
  }
  return K;
}

EvolutionResult evolve_moments(const MomentMatrix& S0, const Eigen::Matrix3cd& K,
                               std::span<const double> t_grid,
                               const PropagationOptions& opts) {
  check_time_grid(t_grid);
  validate_moments(S0);

  EvolutionResult res;
  res.times.assign(t_grid.begin(), t_grid.end());
  if (t_grid.empty()) {
    res.final_state = S0;
    return res;
  }

  const double scale = std::max(S0.trace(), 1e-300);
  EigenPropagator prop = make_propagator(K);
  res.used_integrator_fallback = prop.condition > opts.defective_threshold;

  std::vector<Matrix3cd> snapshots;
  snapshots.reserve(t_grid.size());
  if (!res.used_integrator_fallback) {
    for (double t : t_grid) {
      snapshots.push_back(propagate_closed_form(prop, S0.S, t));
    }
  } else {
    Matrix3cd S = S0.S;
    double t_prev = 0.0;
    for (double t : t_grid) {
      S = rk_segment(S, K, t_prev, t, opts.rk_rel_tol, scale);
      t_prev = t;
      snapshots.push_back(0.5 * (S + S.adjoint()));
    }
  }

  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    auto pops = diag_populations(snapshots[i], scale);
    res.populations.push_back(pops);
    res.population_sum.push_back(pops[kModeC] + pops[kModeP]);
  }
  res.final_state = MomentMatrix{snapshots.back(), t_grid.back()};

  if (opts.rk_cross_check && !res.used_integrator_fallback) {
    // A step integrator must resolve every oscillation; skip (and record) if
    // the grid spans too many radians of the fastest eigenmode.
    const double radians = t_grid.back() * 2.0 * prop.max_abs_eigenvalue();
    if (radians < 4e5) {
      Matrix3cd S = S0.S;
      double t_prev = 0.0;
      for (std::size_t i = 0; i < t_grid.size(); ++i) {
        S = rk_segment(S, K, t_prev, t_grid[i], opts.rk_rel_tol, scale);
        t_prev = t_grid[i];
        const double tr_rk = S.trace().real();
        const double tr_eig = snapshots[i].trace().real();
        const double mismatch =
            std::abs(tr_rk - tr_eig) / std::max({std::abs(tr_eig), std::abs(tr_rk), 1e-12 * scale});
        res.max_cross_check_mismatch = std::max(res.max_cross_check_mismatch, mismatch);
      }
      if (res.max_cross_check_mismatch > 1e-8) {
        throw NumericsError(
            "eigendecomposition and Runge-Kutta paths disagree beyond 1e-8 in trace");
      }
      res.cross_checked = true;
    }
  }
  return res;
}

std::optional<double> delay_time_tau_d(const CouplingConfig& cfg, double fraction,
                                       GammaAPlacement placement) {
  cfg.validate();
  if (!(cfg.gamma_C > 0.0)) {
    throw std::invalid_argument("delay_time_tau_d requires gamma_C > 0");
  }
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw std::invalid_argument("delay_time_tau_d: fraction must lie in (0, 1)");
  }
  if (!(cfg.photon_number > 0.0)) {
    throw std::invalid_argument("delay_time_tau_d requires a nonzero photon number");
  }

  const MomentMatrix S0 = dark_state_moments(cfg);
  const Matrix3cd K = drift_matrix(cfg, placement);
  const EigenPropagator prop = make_propagator(K);
  const bool defective = !std::isfinite(prop.condition) || prop.condition > 1e8;
  const double scale = std::max(S0.trace(), 1e-300);

  // State held at the left bracket edge so the integrator fallback only ever
  // steps forward.
  double t_lo = 0.0;
  Matrix3cd S_lo = S0.S;
  auto sum_from_lo = [&](double t) -> std::pair<double, Matrix3cd> {
    Matrix3cd S = defective ? rk_segment(S_lo, K, t_lo, t, 1e-10, scale)
                            : propagate_closed_form(prop, S0.S, t);
    auto pops = diag_populations(S, scale);
    return {pops[kModeC] + pops[kModeP], S};
  };

  const double threshold = fraction * cfg.photon_number;
  const double t_limit = 1e3 / cfg.gamma_C;
  double t_hi = 0.5 / cfg.gamma_C;
  while (true) {
    auto [sum, S] = sum_from_lo(t_hi);
    if (sum < threshold) break;
    t_lo = t_hi;
    S_lo = S;
    t_hi *= 2.0;
    if (t_hi > t_limit) return std::nullopt;
  }

  while (t_hi - t_lo > 1e-6 * t_hi) {
    const double mid = 0.5 * (t_lo + t_hi);
    auto [sum, S] = sum_from_lo(mid);
    if (sum >= threshold) {
      t_lo = mid;
      S_lo = S;
    } else {
      t_hi = mid;
    }
  }
  return 0.5 * (t_lo + t_hi);
}

std::optional<double> storage_time_tau_s(const RateBreakdown& rate) {
  if (rate.total < 0.0) {
    throw std::invalid_argument("storage_time_tau_s: negative rate");
  }
  if (rate.total == 0.0) return std::nullopt;
  return 1.0 / rate.total;
}

ThetaSweepTable theta_sweep(const CouplingConfig& base,
                            std::span<const double> thetas,
                            std::span<const double> times,
                            GammaAPlacement placement) {
  base.validate();
  if (!(base.omega > 0.0)) {
    throw std::invalid_argument("theta_sweep requires a positive base omega");
  }
  check_time_grid(times);

  ThetaSweepTable table;
  table.thetas.assign(thetas.begin(), thetas.end());
  table.times.assign(times.begin(), times.end());
  table.population_sum.resize(thetas.size());

  PropagationOptions opts;
  opts.rk_cross_check = false;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    CouplingConfig cfg = CouplingConfig::from_theta(
        thetas[i], base.omega, base.gamma_A, base.gamma_C, base.photon_number);
    const MomentMatrix S0 = dark_state_moments(cfg);
    const Matrix3cd K = drift_matrix(cfg, placement);
    EvolutionResult evo = evolve_moments(S0, K, times, opts);
    table.population_sum[i] = std::move(evo.population_sum);
  }
  return table;
}

EvolutionResult storage_protocol(const CouplingConfig& cfg, const StorageRamp& ramp,
                                 GammaAPlacement placement, int samples_per_segment) {
  cfg.validate();
  if (!(ramp.t_on > 0.0) || !(ramp.t_hold > 0.0) || !(ramp.t_off > 0.0)) {
    throw std::invalid_argument("storage_protocol: ramp times must be positive");
  }
  if (samples_per_segment < 2) {
    throw std::invalid_argument("storage_protocol: need at least 2 samples per segment");
  }
  const double omega_tot = std::hypot(cfg.omega, cfg.g_root_N0);
  if (!(omega_tot > 0.0)) {
    throw std::invalid_argument("storage_protocol: couplings must not both vanish");
  }

  const double t1 = ramp.t_on;
  const double t2 = ramp.t_on + ramp.t_hold;
  const double t3 = t2 + ramp.t_off;

  auto theta_at = [&](double t) -> double {
    if (t <= 0.0) return 0.0;
    if (t < t1) {
      const double s = t / t1;
      return ramp.shape == RampShape::linear
                 ? kHalfPi * s
                 : kHalfPi * 0.5 * (1.0 - std::cos(std::numbers::pi * s));
    }
    if (t <= t2) return kHalfPi;
    if (t < t3) {
      const double s = (t - t2) / ramp.t_off;
      return ramp.shape == RampShape::linear
                 ? kHalfPi * (1.0 - s)
                 : kHalfPi * 0.5 * (1.0 + std::cos(std::numbers::pi * s));
    }
    return 0.0;
  };

  auto drift_at = [&](double t) -> Matrix3cd {
    const double th = theta_at(t);
    const cplx mi(0.0, -1.0);
    Matrix3cd K = Matrix3cd::Zero();
    K(kModeA, kModeC) = mi * omega_tot * std::cos(th);
    K(kModeA, kModeP) = mi * omega_tot * std::sin(th);
    K(kModeC, kModeA) = K(kModeA, kModeC);
    K(kModeP, kModeA) = K(kModeA, kModeP);
    K(kModeC, kModeC) = -0.5 * cfg.gamma_C;
    if (placement == GammaAPlacement::photon) {
      K(kModeP, kModeP) = -0.5 * cfg.gamma_A;
    } else {
      K(kModeA, kModeA) = -0.5 * cfg.gamma_A;
    }
    return K;
  };

  const double n = cfg.photon_number;
  const double scale = std::max(n, 1e-300);
  Matrix3cd S = Matrix3cd::Zero();
  S(kModeP, kModeP) = n;  // theta(0) = 0: the dark state is the photon mode

  Rk45Options rk_opts;
  rk_opts.rel_tol = 1e-10;
  rk_opts.abs_tol = 1e-13 * scale;
  auto rhs = [&](double t, const Matrix3cd& y) -> Matrix3cd {
    const Matrix3cd K = drift_at(t);
    return K.conjugate() * y + y * K.transpose();
  };
  auto norm = [](const Matrix3cd& m) { return max_abs(m); };

  EvolutionResult res;
  auto record = [&](double t, const Matrix3cd& St) {
    auto pops = diag_populations(0.5 * (St + St.adjoint()), scale);
    res.times.push_back(t);
    res.populations.push_back(pops);
    res.population_sum.push_back(pops[kModeC] + pops[kModeP]);
  };
  record(0.0, S);

  // Ramp on: adaptive integration through the time-dependent couplings.
  for (int i = 1; i <= samples_per_segment; ++i) {
    const double ta = t1 * (i - 1) / samples_per_segment;
    const double tb = t1 * i / samples_per_segment;
    S = rk45_integrate(rhs, S, ta, tb, rk_opts, norm);
    record(tb, S);
  }

  // Hold: constant drift, propagate in closed form (or step through if the
  // drift happens to be defective).
  {
    const Matrix3cd K_hold = drift_at(0.5 * (t1 + t2));
    const EigenPropagator hold = make_propagator(K_hold);
    const Matrix3cd S_hold_start = S;
    for (int i = 1; i <= samples_per_segment; ++i) {
      const double dt = ramp.t_hold * i / samples_per_segment;
      if (hold.condition <= 1e8) {
        S = propagate_closed_form(hold, S_hold_start, dt);
      } else {
        const double dt_prev = ramp.t_hold * (i - 1) / samples_per_segment;
        S = rk_segment(S, K_hold, t1 + dt_prev, t1 + dt, 1e-10, scale);
      }
      record(t1 + dt, S);
    }
  }

  // Ramp off.
  for (int i = 1; i <= samples_per_segment; ++i) {
    const double ta = t2 + ramp.t_off * (i - 1) / samples_per_segment;
    const double tb = t2 + ramp.t_off * i / samples_per_segment;
    S = rk45_integrate(rhs, S, ta, tb, rk_opts, norm);
    record(tb, S);
  }

  res.final_state = MomentMatrix{0.5 * (S + S.adjoint()), t3};
  return res;
}

}  // namespace eitbec
