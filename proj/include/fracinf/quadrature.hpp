#pragma once

#include <functional>

namespace fracinf {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int evaluations = 0;
  int subdivisions = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite
/// interval. The endpoints are never evaluated, so integrable endpoint
/// singularities are allowed. Always returns; check `converged`.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// As `integrate`, but throws AccuracyError when the tolerance is not met.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& options, const char* what);

}  // namespace fracinf
