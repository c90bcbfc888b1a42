#pragma once

#include <optional>

namespace eitbec {

/// Physical parameters of a homogeneous, weakly interacting condensate.
///
/// All derived scales are fixed at construction:
///   healing wavenumber  k0 = sqrt(8 pi n0 a)
///   chemical potential  mu = (hbar k0)^2 / (2 m)
///   omega0 = mu / hbar  (the chemical potential as an angular frequency)
///   rate prefactor      P = a * omega0 * k0   [1/s]
/// P carries the overall magnitude of the collisional decay rates; everything
/// else in the rate integrals is dimensionless.
class CondensateParams {
 public:
  /// Throws std::invalid_argument unless every argument (and Tc, when given)
  /// is strictly positive and finite.
  CondensateParams(double scattering_length_a, double atom_mass_m,
                   double density_n0, std::optional<double> critical_temp_Tc,
                   double level_splitting_eCB);

  double scattering_length() const { return a_; }      // m
  double atom_mass() const { return m_; }              // kg
  double density() const { return n0_; }               // m^-3
  std::optional<double> critical_temp() const { return tc_; }  // K
  double level_splitting() const { return e_cb_; }     // eps_CB/hbar, rad/s

  double healing_wavenumber() const { return k0_; }    // m^-1
  double chemical_potential() const { return mu_; }    // J
  double omega0() const { return omega0_; }            // rad/s
  double rate_prefactor() const { return prefactor_; } // 1/s

 private:
  double a_, m_, n0_, e_cb_;
  std::optional<double> tc_;
  double k0_, mu_, omega0_, prefactor_;
};

/// Dimensionless evaluation point for the decay-rate integrals.
/// y_k = k/k0, t = k_B T / mu, z_CB = eps_CB / mu.
struct ReducedPoint {
  double y_k;
  double t;
  double z_cb;

  /// Throws std::invalid_argument unless y_k > 0, t >= 0, z_CB > 0.
  ReducedPoint(double y_k, double t, double z_cb);

  /// Kinetic energy of a tagged particle at this momentum, in units of mu.
  double particle_energy() const { return y_k * y_k; }
};

/// Temperature given either in kelvin or as a fraction of Tc.
struct Temperature {
  enum class Kind { kelvin, tc_fraction };
  Kind kind;
  double value;

  static Temperature kelvin(double k) { return {Kind::kelvin, k}; }
  static Temperature tc_fraction(double f) { return {Kind::tc_fraction, f}; }
};

/// Bogoliubov quasiparticle energy in units of mu: z(y) = y sqrt(2 + y^2).
/// Phonon-like (sqrt(2) y) below y ~ 1, free-particle-like (y^2 + 1) above.
/// Throws std::invalid_argument for y < 0.
double bogoliubov_energy(double y);

/// Thermal Bose occupation 1/(exp(z/t) - 1) of a mode at reduced energy z > 0
/// and reduced temperature t >= 0. Returns 0 at t = 0. At z = 0 with t > 0
/// the occupation diverges; returns +infinity rather than overflowing.
double bose_population(double z, double t);

/// n(z) - n(z + shift) for shift >= 0, evaluated in product form so the
/// difference keeps full precision even when shift << z.
double bose_population_difference(double z, double shift, double t);

/// Convert an SI wavenumber and temperature to the dimensionless point.
/// The Tc-fraction form requires params.critical_temp(); throws otherwise.
ReducedPoint reduce(const CondensateParams& params, double k, Temperature T);

struct PhysicalPoint {
  double wavenumber;   // m^-1
  double temperature;  // K
};

/// Inverse of reduce(); exact to double-precision round-off.
PhysicalPoint unreduce(const CondensateParams& params, const ReducedPoint& pt);

}  // namespace eitbec
