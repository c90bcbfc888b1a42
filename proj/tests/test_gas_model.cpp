#include <cmath>
#include <stdexcept>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "eitbec/constants.hpp"
#include "eitbec/gas_model.hpp"
#include "test_helpers.hpp"

using namespace eitbec;
using namespace eitbec::testing;

TEST_CASE("condensate derived scales match the frozen references") {
  const CondensateParams p = hau1999_params();
  CHECK(p.healing_wavenumber() == doctest::Approx(kK0).epsilon(1e-12));
  CHECK(p.chemical_potential() == doctest::Approx(kMu).epsilon(1e-12));
  CHECK(p.omega0() == doctest::Approx(kOmega0).epsilon(1e-12));
  CHECK(p.rate_prefactor() == doctest::Approx(kPrefactor).epsilon(1e-12));

  // Magnitude cross-checks against the published experiment numbers.
  CHECK(p.omega0() / (2.0 * std::numbers::pi) ==
        doctest::Approx(1.21e3).epsilon(0.03));  // quoted mu/hbar = (2pi) 1.21 kHz
  CHECK(p.healing_wavenumber() == doctest::Approx(2.37e6).epsilon(0.01));
}

TEST_CASE("healing wavenumber scaling") {
  const CondensateParams base = hau1999_params();
  const CondensateParams denser(2.8e-9, constants::mass_na23, 4.0 * 8e19, 435e-9,
                                2.0 * std::numbers::pi * 1.8e9);
  CHECK(denser.healing_wavenumber() ==
        doctest::Approx(2.0 * base.healing_wavenumber()).epsilon(1e-14));

  // k0 -> 0 with the scattering length.
  const CondensateParams weak(2.8e-29, constants::mass_na23, 8e19, 435e-9,
                              2.0 * std::numbers::pi * 1.8e9);
  CHECK(weak.healing_wavenumber() < 1e-3);
  CHECK(weak.healing_wavenumber() > 0.0);
}

TEST_CASE("condensate parameter validation") {
  CHECK_THROWS_AS(CondensateParams(0.0, 1e-26, 1e19, 1e-7, 1e9), std::invalid_argument);
  CHECK_THROWS_AS(CondensateParams(1e-9, -1e-26, 1e19, 1e-7, 1e9), std::invalid_argument);
  CHECK_THROWS_AS(CondensateParams(1e-9, 1e-26, 1e19, 0.0, 1e9), std::invalid_argument);
  CHECK_THROWS_AS(CondensateParams(1e-9, 1e-26, 1e19, std::nullopt, 0.0),
                  std::invalid_argument);
  CHECK_NOTHROW(CondensateParams(1e-9, 1e-26, 1e19, std::nullopt, 1e9));
}

TEST_CASE("Bogoliubov dispersion") {
  CHECK(bogoliubov_energy(0.0) == 0.0);
  CHECK(bogoliubov_energy(1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(bogoliubov_energy(-0.1), std::invalid_argument);

  // Free-particle limit z ~ y^2 + 1.
  const double y = 30.0;
  CHECK(std::abs(bogoliubov_energy(y) - y * y - 1.0) < 1e-3);

  // Phonon limit z ~ sqrt(2) y.
  for (double yp : {0.001, 0.005, 0.019}) {
    CHECK(std::abs(bogoliubov_energy(yp) - std::numbers::sqrt2 * yp) / yp < 1e-3);
  }

  // Strictly increasing on a sampled grid.
  double prev = bogoliubov_energy(0.0);
  for (int i = 1; i <= 200; ++i) {
    const double z = bogoliubov_energy(0.25 * i);
    CHECK(z > prev);
    prev = z;
  }
}

TEST_CASE("Bose occupation") {
  CHECK(bose_population(1.0, 0.0) == 0.0);
  CHECK(bose_population(123.0, 0.0) == 0.0);
  // exp(z/t) = 2 gives occupation exactly 1.
  CHECK(bose_population(std::log(2.0) * 1.7, 1.7) == doctest::Approx(1.0).epsilon(1e-14));
  // Frozen: 1/(e^0.267 - 1).
  CHECK(bose_population(0.267, 1.0) == doctest::Approx(3.2675419605145033).epsilon(1e-14));
  // Divergent occupation at z = 0 is an explicit infinity, not an overflow.
  CHECK(std::isinf(bose_population(0.0, 2.0)));
  CHECK_THROWS_AS(bose_population(-1.0, 1.0), std::invalid_argument);

  // Monotonicity: decreasing in z, increasing in t.
  for (int i = 1; i < 40; ++i) {
    const double z = 0.1 * i;
    CHECK(bose_population(z, 1.3) > bose_population(z + 0.1, 1.3));
    CHECK(bose_population(z, 1.3) < bose_population(z, 1.4));
  }
}

TEST_CASE("Bose occupation differences keep precision at small shifts") {
  const double t = 0.73;
  for (double z : {0.05, 0.5, 3.0, 20.0}) {
    for (double shift : {1e-6, 1e-3, 0.1, 5.0, 1e4}) {
      const double direct = bose_population(z, t) - bose_population(z + shift, t);
      const double stable = bose_population_difference(z, shift, t);
      CHECK(stable > 0.0);
      CHECK(stable == doctest::Approx(direct).epsilon(1e-6));
    }
  }
  CHECK(bose_population_difference(1.0, 0.0, 1.0) == 0.0);
  CHECK(bose_population_difference(1.0, 1.0, 0.0) == 0.0);
}

TEST_CASE("reduce to dimensionless variables") {
  const CondensateParams p = hau1999_params();
  const ReducedPoint pt =
      reduce(p, 0.1 * p.healing_wavenumber(), Temperature::tc_fraction(0.5));
  CHECK(pt.y_k == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(pt.t == doctest::Approx(kT05).epsilon(1e-12));
  CHECK(pt.z_cb == doctest::Approx(kZcb).epsilon(1e-12));
  CHECK(pt.particle_energy() == doctest::Approx(0.01).epsilon(1e-14));

  // The experiment's own rounded numbers put t near 3.75 and z_CB near
  // 1.49e6; the full-precision constants land within a few percent.
  CHECK(pt.t == doctest::Approx(3.75).epsilon(0.03));
  CHECK(pt.z_cb == doctest::Approx(1.49e6).epsilon(0.03));

  CHECK(reduce(p, p.healing_wavenumber(), Temperature::kelvin(0.0)).t == 0.0);
}

TEST_CASE("reduce rejects bad inputs") {
  const CondensateParams p = hau1999_params();
  CHECK_THROWS_AS(reduce(p, 0.0, Temperature::kelvin(1e-9)), std::invalid_argument);
  CHECK_THROWS_AS(reduce(p, -1e5, Temperature::kelvin(1e-9)), std::invalid_argument);
  CHECK_THROWS_AS(reduce(p, 1e5, Temperature::kelvin(-1e-9)), std::invalid_argument);

  const CondensateParams no_tc(2.8e-9, constants::mass_na23, 8e19, std::nullopt,
                               2.0 * std::numbers::pi * 1.8e9);
  CHECK_THROWS_AS(reduce(no_tc, 1e5, Temperature::tc_fraction(0.5)),
                  std::invalid_argument);
  CHECK_NOTHROW(reduce(no_tc, 1e5, Temperature::kelvin(1e-7)));
}

TEST_CASE("reduce round-trips through unreduce") {
  const CondensateParams p = hau1999_params();
  for (double k : {1e4, 2.37e6, 5e7}) {
    for (double T : {1e-9, 2.175e-7, 1e-6}) {
      const ReducedPoint pt = reduce(p, k, Temperature::kelvin(T));
      const PhysicalPoint back = unreduce(p, pt);
      CHECK(back.wavenumber == doctest::Approx(k).epsilon(1e-12));
      CHECK(back.temperature == doctest::Approx(T).epsilon(1e-12));
    }
  }
}

TEST_CASE("reduced point validation") {
  CHECK_THROWS_AS(ReducedPoint(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ReducedPoint(1.0, -0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ReducedPoint(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ReducedPoint(1.0, 1.0, -2.0), std::invalid_argument);
  CHECK_NOTHROW(ReducedPoint(1.0, 0.0, 1.0));
}
