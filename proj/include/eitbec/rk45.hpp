#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace eitbec {

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rk45Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  std::size_t max_steps = 20'000'000;
};

/// Adaptive Dormand-Prince 5(4) step integrator from t0 to t1 (t1 > t0).
/// State must support Eigen-style arithmetic (operator+, scalar*, ...);
/// norm(state) must return a max-abs-style scalar. Throws IntegrationError
/// on step underflow or when the step budget runs out.
template <class State, class Rhs, class Norm>
State rk45_integrate(Rhs rhs, State y, double t0, double t1,
                     const Rk45Options& opt, Norm norm) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                   e4 = 125.0 / 192 - 393.0 / 640,
                   e5 = -2187.0 / 6784 + 92097.0 / 339200,
                   e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  if (!(t1 > t0)) {
    if (t1 == t0) return y;
    throw std::invalid_argument("rk45_integrate: t1 must be >= t0");
  }

  double t = t0;
  double h = (t1 - t0) / 100.0;
  State k1 = rhs(t, y);
  // Conservative first step from the initial slope.
  {
    const double d0 = norm(y) + opt.abs_tol;
    const double d1 = norm(k1);
    if (d1 > 0.0) h = std::min(h, 0.01 * d0 / d1);
  }

  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) {
      throw IntegrationError("rk45_integrate: step budget exhausted");
    }
    if (t + h > t1) h = t1 - t;
    if (!(h > 0.0) || t + h == t) {
      throw IntegrationError("rk45_integrate: step size underflow");
    }

    State k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    State k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    State k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    State k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    State k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    State ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = rhs(t + h, ynew);
    State err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = opt.abs_tol + opt.rel_tol * std::max(norm(y), norm(ynew));
    const double err = norm(err_vec) / scale;

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // first-same-as-last; on rejection k1 is still the slope at (t, y)
    }
    const double factor =
        (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
  return y;
}

}  // namespace eitbec
