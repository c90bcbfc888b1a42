#include "eitbec/gas_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eitbec/constants.hpp"

namespace eitbec {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

CondensateParams::CondensateParams(double scattering_length_a, double atom_mass_m,
                                   double density_n0,
                                   std::optional<double> critical_temp_Tc,
                                   double level_splitting_eCB)
    : a_(scattering_length_a),
      m_(atom_mass_m),
      n0_(density_n0),
      e_cb_(level_splitting_eCB),
      tc_(critical_temp_Tc) {
  require_positive(a_, "scattering length");
  require_positive(m_, "atom mass");
  require_positive(n0_, "density");
  require_positive(e_cb_, "level splitting");
  if (tc_) require_positive(*tc_, "critical temperature");

  k0_ = std::sqrt(8.0 * std::numbers::pi * n0_ * a_);
  mu_ = constants::hbar * k0_ * constants::hbar * k0_ / (2.0 * m_);
  omega0_ = mu_ / constants::hbar;
  prefactor_ = a_ * omega0_ * k0_;
}

ReducedPoint::ReducedPoint(double y_k_in, double t_in, double z_cb_in)
    : y_k(y_k_in), t(t_in), z_cb(z_cb_in) {
  if (!(y_k > 0.0) || !std::isfinite(y_k)) {
    throw std::invalid_argument("y_k must be positive");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("reduced temperature must be >= 0");
  }
  if (!(z_cb > 0.0) || !std::isfinite(z_cb)) {
    throw std::invalid_argument("z_CB must be positive");
  }
}

double bogoliubov_energy(double y) {
  if (y < 0.0 || !std::isfinite(y)) {
    throw std::invalid_argument("bogoliubov_energy: y must be >= 0");
  }
  return y * std::sqrt(2.0 + y * y);
}

double bose_population(double z, double t) {
  if (z < 0.0) throw std::invalid_argument("bose_population: z must be >= 0");
  if (t < 0.0) throw std::invalid_argument("bose_population: t must be >= 0");
  if (z == 0.0) return std::numeric_limits<double>::infinity();
  if (t == 0.0) return 0.0;
  const double x = z / t;
  if (x > 700.0) return 0.0;  // exp would overflow; occupation < 1e-304
  return 1.0 / std::expm1(x);
}

double bose_population_difference(double z, double shift, double t) {
  if (shift < 0.0) throw std::invalid_argument("bose_population_difference: shift must be >= 0");
  if (t == 0.0 || shift == 0.0) return 0.0;
  const double xs = shift / t;
  if (xs > 40.0) {
    // n(z+shift) is negligible next to n(z); no cancellation to guard.
    return bose_population(z, t) - bose_population(z + shift, t);
  }
  // n(z) - n(z+s) = e^{z/t} (e^{s/t} - 1) / ((e^{z/t}-1)(e^{(z+s)/t}-1)),
  // a product of well-conditioned factors.
  const double x = z / t;
  if (x > 350.0) {
    // Both occupations are ~ e^{-z/t}; the difference underflows smoothly.
    return std::exp(-x) * (-std::expm1(-xs));
  }
  return std::exp(x) * std::expm1(xs) / (std::expm1(x) * std::expm1(x + xs));
}

ReducedPoint reduce(const CondensateParams& params, double k, Temperature T) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("reduce: wavenumber must be positive");
  }
  double kelvin = 0.0;
  switch (T.kind) {
    case Temperature::Kind::kelvin:
      kelvin = T.value;
      break;
    case Temperature::Kind::tc_fraction:
      if (!params.critical_temp()) {
        throw std::invalid_argument(
            "reduce: T/Tc form requires the critical temperature to be set");
      }
      kelvin = T.value * *params.critical_temp();
      break;
  }
  if (kelvin < 0.0) throw std::invalid_argument("reduce: temperature must be >= 0");

  const double y = k / params.healing_wavenumber();
  const double t = constants::k_boltzmann * kelvin / params.chemical_potential();
  const double z_cb = params.level_splitting() / params.omega0();
  return ReducedPoint(y, t, z_cb);
}

PhysicalPoint unreduce(const CondensateParams& params, const ReducedPoint& pt) {
  return {pt.y_k * params.healing_wavenumber(),
          pt.t * params.chemical_potential() / constants::k_boltzmann};
}

}  // namespace eitbec
