#pragma once

#include <functional>
#include <string>

namespace fracinf {

/// Coefficients of a(x)(-Delta)^s u - c u = f in one space variable (or as
/// radial profiles). `a` must dominate C0 (1 + x^2)^{alpha/2}.
struct CoefficientField {
  std::function<double(double)> a;
  double C0 = 1.0;
  double alpha = 1.0;

  std::function<double(double)> c;
  double c_sup = 0.0;
  bool c_nonpositive = true;

  std::function<double(double)> f;
  double f_sup = 0.0;

  std::string a_label;
  std::string c_label;
  std::string f_label;
};

/// a(x) = scale C0 (1 + x^2)^{alpha/2}, scale >= 1.
void set_power_law_a(CoefficientField& k, double C0, double alpha, double scale = 1.0);
/// c(x) = value.
void set_constant_c(CoefficientField& k, double value);
/// c(x) = -depth exp(-(x/width)^2), depth >= 0.
void set_gaussian_well_c(CoefficientField& k, double depth, double width);
/// f(x) = amplitude exp(1 - 1/(1 - (x/radius)^2)) on |x| < radius, 0 outside.
void set_bump_f(CoefficientField& k, double amplitude, double radius);
void set_zero_f(CoefficientField& k);

/// Reference problem: power-law a, c = 0, f = 0.
CoefficientField power_law_coefficients(double C0, double alpha, double scale = 1.0);

/// Checks alpha > 2s, C0 > 0, and on |x| <= sample_radius that a is positive
/// and above its declared lower bound and that c <= 0 when so flagged.
/// Throws HypothesisError on the first violation.
void validate(const CoefficientField& k, int N, double s, double sample_radius = 1e3);

}  // namespace fracinf
