#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "eitbec/decay_rates.hpp"

namespace eitbec {

/// Raised when two supposedly equivalent numerical routes disagree, or when a
/// conserved quantity drifts beyond its contract.
class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where the spontaneous-emission damping gamma_A/2 acts in the three-mode
/// equations of motion. `photon` is the literal layout of the model
/// equations (damping on the probe-photon row); `excited_state` moves it to
/// the excited-state row, which is the physical assignment for spontaneous
/// emission and the default for every simulation driver in this module.
enum class GammaAPlacement { photon, excited_state };

/// Couplings of the three-mode system (excited state A, tagged atomic mode
/// C_k, probe photon a). Either the pair (omega, g_root_N0) or the mixing
/// angle theta is the primary input; the other is derived through
/// tan(theta) = g_root_N0 / omega and stays consistent to 1e-12 relative.
struct CouplingConfig {
  double omega = 0.0;        // control-field Rabi frequency, rad/s
  double g_root_N0 = 0.0;    // collective probe coupling, rad/s
  double gamma_A = 0.0;      // excited-state decay, 1/s
  double gamma_C = 0.0;      // tagged-mode collisional decay, 1/s
  double photon_number = 0.0;
  double theta = 0.0;        // mixing angle, rad, in [0, pi/2]

  static CouplingConfig from_couplings(double omega, double g_root_N0,
                                       double gamma_A, double gamma_C,
                                       double photon_number);
  /// Fixed control field: g_root_N0 = omega_scale * tan(theta). At
  /// theta = pi/2 the control field is off (omega = 0) and the photon sector
  /// is decoupled from the dynamics of interest.
  static CouplingConfig from_theta(double theta, double omega_scale,
                                   double gamma_A, double gamma_C,
                                   double photon_number);

  void validate() const;
};

/// Second moments S[i][j] = <v_i^dag v_j> of the mode vector
/// v = (A, C_k, a). Hermitian and positive semidefinite along any physical
/// trajectory; the diagonal holds the populations (n_A, n_C, n_p).
struct MomentMatrix {
  Eigen::Matrix3cd S = Eigen::Matrix3cd::Zero();
  double time = 0.0;

  double n_A() const { return S(0, 0).real(); }
  double n_C() const { return S(1, 1).real(); }
  double n_p() const { return S(2, 2).real(); }
  double population_sum() const { return n_C() + n_p(); }
  double trace() const { return S.trace().real(); }

  /// max |S - S^dag| over the largest entry magnitude.
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part, relative to the trace.
  double min_eigenvalue_over_trace() const;
};

/// Throws NumericsError if S violates Hermiticity (1e-10 of largest entry)
/// or positive semidefiniteness (eigenvalues >= -1e-10 * trace).
void validate_moments(const MomentMatrix& m);

/// t = 0 second moments of the n-excitation beam-splitter (dark) state:
/// n_A = 0, n_p = n cos^2(theta), n_C = n sin^2(theta),
/// <a^dag C> = -n sin(theta) cos(theta). Rank one by construction.
MomentMatrix dark_state_moments(const CouplingConfig& cfg);

/// Drift matrix K of d/dt (A, C_k, a)^T = K (A, C_k, a)^T:
///   dA/dt = -i omega C - i g a            (+ gamma_A/2 damping if excited_state)
///   dC/dt = -i omega A - gamma_C/2 C
///   da/dt = -i g A                        (+ gamma_A/2 damping if photon)
Eigen::Matrix3cd drift_matrix(const CouplingConfig& cfg,
                              GammaAPlacement placement = GammaAPlacement::photon);

struct PropagationOptions {
  /// Re-integrate the moment equations with adaptive Runge-Kutta and require
  /// the trace to match the eigendecomposition path to 1e-8 relative. Skipped
  /// (and recorded as such) when the grid spans too many oscillation periods
  /// for a step integrator to be practical.
  bool rk_cross_check = true;
  double rk_rel_tol = 1e-10;
  /// Eigenvector condition number above which K is treated as defective and
  /// the propagation falls back to the integrator path.
  double defective_threshold = 1e8;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<std::array<double, 3>> populations;  // (n_A, n_C, n_p) per time
  std::vector<double> population_sum;              // n_C + n_p per time
  MomentMatrix final_state;
  bool used_integrator_fallback = false;
  bool cross_checked = false;
  double max_cross_check_mismatch = 0.0;
};

/// Propagates S(t) from S0 through the strictly increasing time grid
/// (seconds, starting at or after S0.time = 0). The propagator M(t) = e^{Kt}
/// is built from the eigendecomposition of K; moments evolve as
/// S(t) = conj(M) S0 M^T.
EvolutionResult evolve_moments(const MomentMatrix& S0, const Eigen::Matrix3cd& K,
                               std::span<const double> t_grid,
                               const PropagationOptions& opts = {});

/// Exact density-matrix reference dynamics on the truncated Fock space of the
/// three modes (total excitation <= n, requires integer photon_number <= 4):
/// H/hbar = omega (A^dag C + C^dag A) + g (A^dag a + a^dag A) with loss
/// channels gamma_C on C and gamma_A on a (or on A for excited_state
/// placement). Aborts if the trace drifts by more than 1e-9.
EvolutionResult lindblad_oracle(const CouplingConfig& cfg,
                                std::span<const double> t_grid,
                                GammaAPlacement placement = GammaAPlacement::photon);

/// First time at which n_p + n_C, starting from the dark state, crosses
/// below fraction * n: exponential bracketing then bisection to 1e-6
/// relative accuracy. Returns nullopt if no crossing occurs within
/// 1e3 / gamma_C. Requires gamma_C > 0.
std::optional<double> delay_time_tau_d(
    const CouplingConfig& cfg, double fraction = 0.36787944117144233,
    GammaAPlacement placement = GammaAPlacement::excited_state);

/// Maximum storage time 1/gamma_C(k). nullopt flags the infinite-storage
/// case of a vanishing rate.
std::optional<double> storage_time_tau_s(const RateBreakdown& rate);

struct ThetaSweepTable {
  std::vector<double> thetas;
  std::vector<double> times;
  /// population_sum[i][j] = n_p + n_C at (thetas[i], times[j]).
  std::vector<std::vector<double>> population_sum;
};

/// Sweeps the mixing angle at fixed control field omega = base.omega
/// (g_root_N0 = omega tan(theta)), evolving the dark state at each angle.
ThetaSweepTable theta_sweep(const CouplingConfig& base,
                            std::span<const double> thetas,
                            std::span<const double> times,
                            GammaAPlacement placement = GammaAPlacement::excited_state);

enum class RampShape { linear, cosine };

struct StorageRamp {
  double t_on = 0.0;    // seconds, > 0
  double t_hold = 0.0;  // seconds, > 0
  double t_off = 0.0;   // seconds, > 0
  RampShape shape = RampShape::cosine;
};

/// Light-storage cycle: theta ramps 0 -> pi/2, holds, then returns to 0,
/// with the generalized coupling Omega_tot = hypot(omega, g_root_N0) held
/// fixed so every instantaneous coupling stays finite (omega = Omega_tot
/// cos(theta), g_root_N0 = Omega_tot sin(theta)). Starts from n photons; the
/// time-dependent moment equations are integrated adaptively through the
/// ramps, analytically through the hold. The recovered photon number is
/// n_p at the end of the cycle.
EvolutionResult storage_protocol(const CouplingConfig& cfg, const StorageRamp& ramp,
                                 GammaAPlacement placement = GammaAPlacement::excited_state,
                                 int samples_per_segment = 64);

}  // namespace eitbec
