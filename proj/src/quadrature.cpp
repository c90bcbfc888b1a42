#include "eitbec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace eitbec {

QuadratureError::QuadratureError(const std::string& what, QuadratureOutcome best)
    : std::runtime_error(what), best_(best) {}

namespace {

// 15-point Kronrod abscissae on [-1,1] (positive half) and weights; the
// odd-index abscissae form the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b;
  double value;
  double error;
};

bool operator<(const Interval& lhs, const Interval& rhs) {
  return lhs.error < rhs.error;  // max-heap on error
}

Interval gauss_kronrod_15(const std::function<double(double)>& f, double a,
                          double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(center - half * kXgk[i]);
    fv[14 - i] = f(center + half * kXgk[i]);
  }
  fv[7] = f(center);

  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    resk += kWgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }

  // QUADPACK-style sharpened error estimate.
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i) {
    resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  }
  resasc *= std::abs(half);

  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  return {a, b, resk * half, err};
}

}  // namespace

QuadratureOutcome integrate_adaptive(const std::function<double(double)>& f,
                                     const std::vector<double>& breakpoints,
                                     double rel_tol, double abs_tol,
                                     int max_subdivisions) {
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
  }
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw std::invalid_argument("integrate_adaptive: breakpoints must be sorted");
  }
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("integrate_adaptive: tolerances must be positive");
  }

  std::priority_queue<Interval> heap;
  double total = 0.0;
  double heap_err = 0.0;
  double finalized_err = 0.0;  // intervals at machine width, no longer refinable
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    Interval iv = gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
    total += iv.value;
    heap_err += iv.error;
    heap.push(iv);
  }

  int splits = 0;
  auto tolerance_met = [&] {
    return heap_err + finalized_err <= std::max(abs_tol, rel_tol * std::abs(total));
  };
  while (!tolerance_met()) {
    if (splits >= max_subdivisions || heap.empty()) {
      return {total, heap_err + finalized_err, splits, false};
    }
    Interval worst = heap.top();
    heap.pop();
    heap_err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      finalized_err += worst.error;
      continue;
    }
    Interval left = gauss_kronrod_15(f, worst.a, mid);
    Interval right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    heap_err += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }

  return {total, heap_err + finalized_err, splits, true};
}

}  // namespace eitbec
