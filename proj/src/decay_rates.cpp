#include "eitbec/decay_rates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "eitbec/constants.hpp"

namespace eitbec {

namespace {

// 1 - 1/sqrt(1+z^2) without the subtractive cancellation at small z.
double coupling_weight(double z) {
  const double s = std::sqrt(1.0 + z * z);
  return z * z / (s * (1.0 + s));
}

// 1 - asinh(q)/q; series branch below q = 0.05 where the direct form loses
// digits to cancellation.
double one_minus_asinh_over(double q) {
  if (q < 0.05) {
    const double q2 = q * q;
    return q2 * (1.0 / 6.0 +
                 q2 * (-3.0 / 40.0 +
                       q2 * (15.0 / 336.0 + q2 * (-105.0 / 3456.0))));
  }
  return 1.0 - std::asinh(q) / q;
}

struct ChannelResult {
  double rate = 0.0;
  double error = 0.0;  // same units as the rate
};

ChannelResult integrate_channel(const std::function<double(double)>& f,
                                const std::vector<double>& breakpoints,
                                const CondensateParams& params,
                                const ReducedPoint& pt,
                                const QuadratureSettings& q, const char* channel) {
  // Tolerances act on the dimensionless integral; the rate is (P/y) * I, so
  // an absolute integral tolerance of scale*y yields a rate tolerance of
  // scale*P.
  QuadratureOutcome out =
      integrate_adaptive(f, breakpoints, q.relative_tolerance,
                         q.absolute_tolerance_scale * pt.y_k, q.max_subdivisions);
  const double to_rate = params.rate_prefactor() / pt.y_k;
  if (!out.converged) {
    throw QuadratureError(
        std::string(channel) + " rate quadrature did not converge within " +
            std::to_string(q.max_subdivisions) + " subdivisions (error estimate " +
            std::to_string(out.error_estimate * to_rate) + " 1/s)",
        out);
  }
  return {to_rate * out.value, to_rate * out.error_estimate};
}

ChannelResult beliaev_channel(const CondensateParams& params,
                              const ReducedPoint& pt, const QuadratureSettings& q,
                              bool neglect_final_state_population) {
  const double y2 = pt.particle_energy();
  const double t = pt.t;
  const double z_cb = pt.z_cb;

  if (t == 0.0) {
    return integrate_channel([](double z) { return coupling_weight(z); },
                             {0.0, 0.5 * y2, y2}, params, pt, q, "Beliaev");
  }

  std::set<double> pts = {0.0, 0.5 * y2, y2};
  // The final-state occupation n_C(y^2 + z_CB - z) rises to ~t/z_CB at the
  // upper endpoint when z_CB < t; seed geometrically refined intervals there
  // so the adaptive pass starts with that structure resolved.
  if (!neglect_final_state_population && z_cb < 10.0 * t) {
    double delta = std::max(z_cb, 1e-14 * y2);
    while (delta < 0.5 * y2) {
      pts.insert(y2 - delta);
      delta *= 4.0;
    }
  }

  auto f = [&](double z) {
    double occ = bose_population(z, t);
    if (!neglect_final_state_population) {
      occ += bose_population(y2 + z_cb - z, t);
    }
    return coupling_weight(z) * (1.0 + occ);
  };
  return integrate_channel(f, {pts.begin(), pts.end()}, params, pt, q, "Beliaev");
}

ChannelResult landau_channel(const CondensateParams& params,
                             const ReducedPoint& pt, const QuadratureSettings& q,
                             bool neglect_final_state_population) {
  const double t = pt.t;
  if (t == 0.0) return {0.0, 0.0};

  const double shift = pt.particle_energy() + pt.z_cb;
  auto f = [&](double z) {
    if (neglect_final_state_population) {
      return coupling_weight(z) * bose_population(z, t);
    }
    return coupling_weight(z) * bose_population_difference(z, shift, t);
  };

  const double z_max = q.landau_cutoff_multiplier * std::max(1.0, t);
  std::vector<double> pts;
  for (double p : {0.0, 0.5 * t, t, 4.0 * t, 10.0 * t, 30.0 * t}) {
    if (p < z_max) pts.push_back(p);
  }
  pts.push_back(z_max);

  ChannelResult res = integrate_channel(f, pts, params, pt, q, "Landau");
  // Truncation tail: the integrand beyond z_max is below e^{-z/t}, so the
  // discarded piece is below t*e^{-z_max/t}.
  res.error += params.rate_prefactor() / pt.y_k * t * std::exp(-z_max / t);
  return res;
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(relative_tolerance > 0.0) || !(absolute_tolerance_scale > 0.0)) {
    throw std::invalid_argument("QuadratureSettings: tolerances must be positive");
  }
  if (!(landau_cutoff_multiplier >= 10.0)) {
    throw std::invalid_argument("QuadratureSettings: cutoff multiplier must be >= 10");
  }
  if (max_subdivisions < 1) {
    throw std::invalid_argument("QuadratureSettings: max_subdivisions must be >= 1");
  }
}

double beliaev_rate(const CondensateParams& params, const ReducedPoint& pt,
                    const QuadratureSettings& q,
                    bool neglect_final_state_population) {
  q.validate();
  return beliaev_channel(params, pt, q, neglect_final_state_population).rate;
}

double landau_rate(const CondensateParams& params, const ReducedPoint& pt,
                   const QuadratureSettings& q,
                   bool neglect_final_state_population) {
  q.validate();
  return landau_channel(params, pt, q, neglect_final_state_population).rate;
}

RateBreakdown total_rate(const CondensateParams& params, const ReducedPoint& pt,
                         const QuadratureSettings& q,
                         bool neglect_final_state_population) {
  q.validate();
  ChannelResult b = beliaev_channel(params, pt, q, neglect_final_state_population);
  ChannelResult l = landau_channel(params, pt, q, neglect_final_state_population);

  RateBreakdown rb{b.rate, l.rate, b.rate + l.rate, pt, b.error + l.error};
  const double bound = 1e-6 * std::max(rb.total, params.rate_prefactor());
  if (!(rb.quadrature_error_estimate < bound)) {
    throw QuadratureError("rate error estimate exceeds the invariant bound",
                          {rb.total, rb.quadrature_error_estimate, 0, false});
  }
  return rb;
}

double rate_t0_closed_form(const CondensateParams& params, double y_k) {
  if (!(y_k > 0.0)) throw std::invalid_argument("rate_t0_closed_form: y_k must be > 0");
  return params.rate_prefactor() * y_k * one_minus_asinh_over(y_k * y_k);
}

double kinetic_theory_rate(const CondensateParams& params, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("kinetic_theory_rate: k must be > 0");
  const double sigma = 4.0 * std::numbers::pi * params.scattering_length() *
                       params.scattering_length();
  const double v = constants::hbar * k / params.atom_mass();
  return params.density() * sigma * v;
}

double low_k_asymptote(const CondensateParams& params, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("low_k_asymptote: k must be > 0");
  const double k5 = k * k * k * k * k;
  return constants::hbar * k5 /
         (96.0 * params.atom_mass() * std::numbers::pi * params.density());
}

MinimizeResult minimize_rate_over_k(const CondensateParams& params, double t,
                                    double z_cb, double y_lo, double y_hi,
                                    const QuadratureSettings& q,
                                    int coarse_points) {
  if (!(y_lo > 0.0) || !(y_hi > y_lo)) {
    throw std::invalid_argument("minimize_rate_over_k: need 0 < y_lo < y_hi");
  }
  if (coarse_points < 3) {
    throw std::invalid_argument("minimize_rate_over_k: need at least 3 coarse points");
  }

  auto rate_at = [&](double y) {
    return total_rate(params, ReducedPoint(y, t, z_cb), q);
  };
  auto total_at = [&](double y) { return rate_at(y).total; };

  const double u_lo = std::log(y_lo), u_hi = std::log(y_hi);
  std::vector<double> grid_u(coarse_points), grid_f(coarse_points);
  int best = 0;
  for (int i = 0; i < coarse_points; ++i) {
    grid_u[i] = u_lo + (u_hi - u_lo) * i / (coarse_points - 1);
    grid_f[i] = total_at(std::exp(grid_u[i]));
    if (grid_f[i] < grid_f[best]) best = i;
  }

  if (best == 0 || best == coarse_points - 1) {
    const double y_star = std::exp(grid_u[best]);
    return {y_star, rate_at(y_star), false};
  }

  // Golden-section refinement in log-y on the bracketing triple; log-space
  // interval width is exactly the relative y width.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = grid_u[best - 1], b = grid_u[best + 1];
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = total_at(std::exp(x1));
  double f2 = total_at(std::exp(x2));
  while (b - a > 1e-4) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = total_at(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = total_at(std::exp(x2));
    }
  }
  const double y_star = std::exp(0.5 * (a + b));
  return {y_star, rate_at(y_star), true};
}

}  // namespace eitbec
