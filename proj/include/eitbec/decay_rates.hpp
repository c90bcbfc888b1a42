#pragma once

#include "eitbec/gas_model.hpp"
#include "eitbec/quadrature.hpp"

namespace eitbec {

/// Numerical controls for the rate integrals.
struct QuadratureSettings {
  double relative_tolerance = 1e-9;
  /// Absolute tolerance on a rate, as a fraction of the prefactor P.
  double absolute_tolerance_scale = 1e-12;
  /// The semi-infinite Landau integral is truncated at
  /// z_max = landau_cutoff_multiplier * max(1, t); the integrand tail is
  /// bounded by e^{-z/t}, so the truncation error t*e^{-z_max/t} is added to
  /// the reported error estimate.
  double landau_cutoff_multiplier = 60.0;
  int max_subdivisions = 200;

  /// Throws std::invalid_argument on out-of-range values
  /// (tolerances > 0, cutoff multiplier >= 10, max_subdivisions >= 1).
  void validate() const;
};

/// Collisional decay rates of a momentum-tagged excitation, in 1/s.
struct RateBreakdown {
  double beliaev = 0.0;
  double landau = 0.0;
  double total = 0.0;  // beliaev + landau, exact sum
  ReducedPoint point;
  double quadrature_error_estimate = 0.0;
};

/// Beliaev channel: the tagged particle collides with a condensate atom and
/// splits its energy between a quasiparticle and a lower-momentum tagged
/// particle. The only channel that survives at t = 0.
///
///   gamma_B = (P/y) Int_0^{y^2} dz w(z) (1 + n_C(y^2 + z_CB - z) + n_B(z)),
///   w(z) = 1 - 1/sqrt(1+z^2).
///
/// `neglect_final_state_population` forces n_C = 0 (the z_CB >> t regime).
/// Throws QuadratureError on non-convergence.
double beliaev_rate(const CondensateParams& params, const ReducedPoint& pt,
                    const QuadratureSettings& q = {},
                    bool neglect_final_state_population = false);

/// Landau channel: the tagged particle absorbs a thermal quasiparticle.
///
///   gamma_L = (P/y) Int_0^inf dz w(z) (n_B(z) - n_C(y^2 + z_CB + z)).
///
/// Returns exactly 0 at t = 0. Same error contract as beliaev_rate.
double landau_rate(const CondensateParams& params, const ReducedPoint& pt,
                   const QuadratureSettings& q = {},
                   bool neglect_final_state_population = false);

/// Both channels and their sum. Enforces the error-estimate invariant
/// estimate < 1e-6 * max(total, P); throws QuadratureError otherwise.
RateBreakdown total_rate(const CondensateParams& params, const ReducedPoint& pt,
                         const QuadratureSettings& q = {},
                         bool neglect_final_state_population = false);

/// Zero-temperature Beliaev rate in closed form:
///   P * y * (1 - ln(y^2 + sqrt(1 + y^4)) / y^2).
/// A series branch protects the small-y cancellation.
double rate_t0_closed_form(const CondensateParams& params, double y_k);

/// Classical kinetic-theory collision rate n0 * (4 pi a^2) * (hbar k / m).
double kinetic_theory_rate(const CondensateParams& params, double k);

/// Low-momentum limit of the T=0 rate: hbar k^5 / (96 m pi n0).
double low_k_asymptote(const CondensateParams& params, double k);

struct MinimizeResult {
  double y_star = 0.0;
  RateBreakdown rate;
  /// False when the minimum sits on the search boundary (e.g. at t = 0 the
  /// rate increases monotonically and the best point is y_lo).
  bool interior_minimum = false;
};

/// Minimizes the total rate over y in [y_lo, y_hi]: a logarithmic coarse grid
/// locates a bracket, golden-section refines it to relative y-tolerance 1e-4.
MinimizeResult minimize_rate_over_k(const CondensateParams& params, double t,
                                    double z_cb, double y_lo, double y_hi,
                                    const QuadratureSettings& q = {},
                                    int coarse_points = 64);

}  // namespace eitbec
