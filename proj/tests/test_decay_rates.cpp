#include <cmath>
#include <stdexcept>
#include <numbers>

#include "doctest.h"
#include "eitbec/constants.hpp"
#include "eitbec/decay_rates.hpp"
#include "test_helpers.hpp"

using namespace eitbec;
using namespace eitbec::testing;

namespace {
const CondensateParams kParams = hau1999_params();
}

TEST_CASE("zero-temperature quadrature reproduces the closed form") {
  // The T=0 integrand has the exact antiderivative z - asinh(z), so the
  // closed form is an independent oracle for the quadrature path.
  for (double y : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 50.0}) {
    const ReducedPoint pt(y, 0.0, kZcb);
    const double quad = beliaev_rate(kParams, pt);
    const double closed = rate_t0_closed_form(kParams, y);
    CHECK(std::abs(quad - closed) / closed < 1e-7);
  }
}

TEST_CASE("closed-form T=0 rate against frozen references") {
  // mpmath, 40 digits, same constants.
  CHECK(rate_t0_closed_form(kParams, 0.01) ==
        doctest::Approx(8.609958356119858e-10).epsilon(1e-11));
  CHECK(rate_t0_closed_form(kParams, 0.1) ==
        doctest::Approx(8.609570969797721e-5).epsilon(1e-12));
  CHECK(rate_t0_closed_form(kParams, 1.0) ==
        doctest::Approx(6.128210881762613).epsilon(1e-12));
  CHECK(rate_t0_closed_form(kParams, 50.0) ==
        doctest::Approx(2574.187596935779).epsilon(1e-12));

  // Magnitude quoted for the y_k = 1 point of the experiment parameters.
  CHECK(rate_t0_closed_form(kParams, 1.0) == doctest::Approx(5.99).epsilon(0.05));
  CHECK_THROWS_AS(rate_t0_closed_form(kParams, 0.0), std::invalid_argument);
}

TEST_CASE("closed-form series branch joins the direct branch smoothly") {
  // Frozen references either side of the q = y^2 = 0.05 branch switch.
  CHECK(rate_t0_closed_form(kParams, std::sqrt(0.0499)) ==
        doctest::Approx(0.0047837253349158654).epsilon(1e-12));
  CHECK(rate_t0_closed_form(kParams, std::sqrt(0.0501)) ==
        doctest::Approx(0.0048317592325469799).epsilon(1e-12));
}

TEST_CASE("kinetic theory rate") {
  const double k0 = kParams.healing_wavenumber();
  // At k = k0 the kinetic-theory rate equals the prefactor identically:
  // n0 sigma hbar k0 / m = a omega0 k0.
  CHECK(kinetic_theory_rate(kParams, k0) ==
        doctest::Approx(kParams.rate_prefactor()).epsilon(1e-12));
  CHECK(kinetic_theory_rate(kParams, k0) == doctest::Approx(51.66).epsilon(0.001));
  CHECK(kinetic_theory_rate(kParams, 2.0 * k0) ==
        doctest::Approx(2.0 * kinetic_theory_rate(kParams, k0)).epsilon(1e-14));

  const CondensateParams doubled_a(5.6e-9, constants::mass_na23, 8e19, 435e-9,
                                   2.0 * std::numbers::pi * 1.8e9);
  CHECK(kinetic_theory_rate(doubled_a, k0) ==
        doctest::Approx(4.0 * kinetic_theory_rate(kParams, k0)).epsilon(1e-14));
}

TEST_CASE("low-momentum asymptote") {
  const double k0 = kParams.healing_wavenumber();
  CHECK(low_k_asymptote(kParams, 2.0 * 1e4) ==
        doctest::Approx(32.0 * low_k_asymptote(kParams, 1e4)).epsilon(1e-13));

  for (double y : {0.02, 0.05}) {
    const double ratio =
        rate_t0_closed_form(kParams, y) / low_k_asymptote(kParams, y * k0);
    CHECK(ratio > 0.98);
    CHECK(ratio < 1.02);
  }

  // High-momentum limit approaches kinetic theory.
  const double ratio50 =
      rate_t0_closed_form(kParams, 50.0) / kinetic_theory_rate(kParams, 50.0 * k0);
  CHECK(ratio50 == doctest::Approx(0.9965931227074335).epsilon(1e-10));
}

TEST_CASE("finite-temperature channels against frozen references") {
  // T/Tc = 0.5 at the experiment's level splitting; the final-state
  // occupation is frozen out entirely (z_CB/t ~ 4e5).
  const ReducedPoint p01(0.1, kT05, kZcb);
  const ReducedPoint p10(1.0, kT05, kZcb);
  CHECK(beliaev_rate(kParams, p01) ==
        doctest::Approx(0.047335541230036766).epsilon(1e-8));
  CHECK(landau_rate(kParams, p01) ==
        doctest::Approx(1995.6615720797804).epsilon(1e-8));
  CHECK(beliaev_rate(kParams, p10) ==
        doctest::Approx(38.772983532080574).epsilon(1e-8));
  CHECK(landau_rate(kParams, p10) ==
        doctest::Approx(199.56615720797804).epsilon(1e-8));

  // Storage times quoted for the experiment: 0.5 ms and 4.1 ms.
  const RateBreakdown r01 = total_rate(kParams, p01);
  const RateBreakdown r10 = total_rate(kParams, p10);
  CHECK(1.0 / r01.total == doctest::Approx(0.5e-3).epsilon(0.15));
  CHECK(1.0 / r10.total == doctest::Approx(4.1e-3).epsilon(0.15));
}

TEST_CASE("mid-regime point with an active final-state spike") {
  // z_CB = 0.01 < t puts an integrable spike at the Beliaev endpoint.
  const ReducedPoint pt(0.3, kT03, 0.01);
  CHECK(beliaev_rate(kParams, pt) ==
        doctest::Approx(2.6427968593968289).epsilon(1e-7));
  CHECK(landau_rate(kParams, pt) ==
        doctest::Approx(26.210548015839790).epsilon(1e-8));
}

TEST_CASE("level-splitting sweep at low momentum") {
  const double y = 0.05;
  // Frozen references at T/Tc = 0.1.
  const ReducedPoint lo(y, kT01, 1e-4);
  const ReducedPoint mid(y, kT01, 1e-2);
  const ReducedPoint hi(y, kT01, 1e2);
  CHECK(landau_rate(kParams, lo) == doctest::Approx(1.1776631618338489).epsilon(1e-7));
  CHECK(landau_rate(kParams, mid) == doctest::Approx(5.4706796342310677).epsilon(1e-7));
  CHECK(landau_rate(kParams, hi) == doctest::Approx(193.22834838635104).epsilon(1e-8));
  CHECK(beliaev_rate(kParams, lo) == doctest::Approx(0.0058738257928067203).epsilon(1e-6));
  CHECK(beliaev_rate(kParams, mid) == doctest::Approx(0.0013681967113990780).epsilon(1e-6));
  CHECK(beliaev_rate(kParams, hi) == doctest::Approx(0.0011836994080183415).epsilon(1e-6));

  // The Landau channel grows strongly with the splitting; Beliaev shrinks.
  CHECK(landau_rate(kParams, hi) > 10.0 * landau_rate(kParams, lo));
  CHECK(beliaev_rate(kParams, hi) < beliaev_rate(kParams, mid));
  CHECK(beliaev_rate(kParams, mid) < beliaev_rate(kParams, lo));
}

TEST_CASE("large splitting saturates: dropping the final-state occupation is exact") {
  const ReducedPoint pt(0.05, kT01, 1e2);
  const RateBreakdown full = total_rate(kParams, pt, {}, false);
  const RateBreakdown bare = total_rate(kParams, pt, {}, true);
  CHECK(std::abs(full.total - bare.total) / full.total < 1e-3);
}

TEST_CASE("Landau channel basics") {
  CHECK(landau_rate(kParams, ReducedPoint(0.7, 0.0, kZcb)) == 0.0);

  // Positivity for z_CB > 0, t > 0 across a grid.
  for (double y : {0.05, 0.3, 1.0, 4.0}) {
    for (double t : {0.2, 1.0, 3.7}) {
      CHECK(landau_rate(kParams, ReducedPoint(y, t, 0.5)) > 0.0);
    }
  }
}

TEST_CASE("total rate is monotone in temperature") {
  double prev = 0.0;
  for (double t : {0.5, 1.0, 2.0, 3.0, 4.0}) {
    const double total = total_rate(kParams, ReducedPoint(0.5, t, kZcb)).total;
    CHECK(total > prev);
    prev = total;
  }
}

TEST_CASE("total rate bookkeeping") {
  const ReducedPoint pt(0.4, kT05, kZcb);
  const RateBreakdown rb = total_rate(kParams, pt);
  CHECK(rb.beliaev >= 0.0);
  CHECK(rb.landau >= 0.0);
  CHECK(rb.total == rb.beliaev + rb.landau);
  CHECK(rb.quadrature_error_estimate >= 0.0);
  CHECK(rb.quadrature_error_estimate <
        1e-6 * std::max(rb.total, kParams.rate_prefactor()));
  CHECK(rb.point.y_k == pt.y_k);

  const RateBreakdown cold = total_rate(kParams, ReducedPoint(0.4, 0.0, kZcb));
  CHECK(cold.landau == 0.0);
  CHECK(cold.total == cold.beliaev);
}

TEST_CASE("doubling the Landau cutoff leaves the rate unchanged") {
  QuadratureSettings wide;
  wide.landau_cutoff_multiplier = 120.0;
  for (double t : {0.7, 2.0, 5.0}) {
    const ReducedPoint pt(0.1, t, kZcb);
    const double base = landau_rate(kParams, pt);
    const double extended = landau_rate(kParams, pt, wide);
    CHECK(std::abs(extended - base) / base < 1e-8);
  }
}

TEST_CASE("quadrature failure carries its error estimate") {
  QuadratureSettings strangled;
  strangled.relative_tolerance = 1e-15;
  strangled.absolute_tolerance_scale = 1e-18;
  strangled.max_subdivisions = 1;
  const ReducedPoint pt(0.3, kT03, 0.01);
  try {
    beliaev_rate(kParams, pt, strangled);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.best().error_estimate > 0.0);
    CHECK_FALSE(e.best().converged);
  }
}

TEST_CASE("quadrature settings validation") {
  QuadratureSettings q;
  q.relative_tolerance = 0.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = {};
  q.landau_cutoff_multiplier = 5.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = {};
  q.max_subdivisions = 0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  CHECK_NOTHROW(QuadratureSettings{}.validate());
}

TEST_CASE("rate minimization over momentum") {
  // T = 0: monotone increasing, boundary minimum at y_lo.
  const MinimizeResult cold = minimize_rate_over_k(kParams, 0.0, kZcb, 0.05, 10.0);
  CHECK_FALSE(cold.interior_minimum);
  CHECK(cold.y_star == doctest::Approx(0.05).epsilon(1e-12));

  // T/Tc = 0.1 with a large splitting: interior minimum near y ~ 0.73.
  const MinimizeResult warm = minimize_rate_over_k(kParams, kT01, kZcb, 0.02, 20.0);
  CHECK(warm.interior_minimum);
  CHECK(warm.y_star > 0.6);
  CHECK(warm.y_star < 0.9);
  CHECK(warm.rate.total < total_rate(kParams, ReducedPoint(0.3, kT01, kZcb)).total);
  CHECK(warm.rate.total < total_rate(kParams, ReducedPoint(2.0, kT01, kZcb)).total);

  // The optimum momentum grows with temperature.
  const MinimizeResult warmer = minimize_rate_over_k(kParams, kT03, kZcb, 0.02, 20.0);
  const MinimizeResult hot = minimize_rate_over_k(kParams, kT05, kZcb, 0.02, 20.0);
  CHECK(warm.y_star < warmer.y_star);
  CHECK(warmer.y_star < hot.y_star);

  CHECK_THROWS_AS(minimize_rate_over_k(kParams, 1.0, kZcb, 2.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimize_rate_over_k(kParams, 1.0, kZcb, -1.0, 2.0),
                  std::invalid_argument);
}
