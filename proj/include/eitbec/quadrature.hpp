#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace eitbec {

struct QuadratureOutcome {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;   // refinement splits performed
  bool converged = false;
};

/// Thrown when the adaptive subdivision budget runs out before the error
/// estimate meets the requested tolerance. Carries the best values so far.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureOutcome best);
  const QuadratureOutcome& best() const { return best_; }

 private:
  QuadratureOutcome best_;
};

/// Globally adaptive Gauss-Kronrod (G7,K15) integration over the union of
/// the intervals defined by `breakpoints` (sorted, at least two entries).
/// The worst interval by error estimate is bisected until
///   sum(err) <= max(abs_tol, rel_tol * |sum(value)|)
/// or max_subdivisions splits have been spent, in which case the outcome is
/// returned with converged = false. Kronrod nodes are interior, so the
/// integrand is never evaluated at a breakpoint.
QuadratureOutcome integrate_adaptive(const std::function<double(double)>& f,
                                     const std::vector<double>& breakpoints,
                                     double rel_tol, double abs_tol,
                                     int max_subdivisions);

}  // namespace eitbec
