#include "fracinf/coefficients.hpp"

#include <cmath>
#include <sstream>

#include "fracinf/errors.hpp"

namespace fracinf {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void set_power_law_a(CoefficientField& k, double C0, double alpha, double scale) {
  if (!(C0 > 0.0)) throw HypothesisError("power-law a: C0 must be positive");
  if (!(scale >= 1.0)) throw HypothesisError("power-law a: scale must be at least 1");
  k.C0 = C0;
  k.alpha = alpha;
  k.a = [C0, alpha, scale](double x) { return scale * C0 * std::pow(1.0 + x * x, 0.5 * alpha); };
  k.a_label = "power_law(C0=" + fmt(C0) + ",alpha=" + fmt(alpha) + ",scale=" + fmt(scale) + ")";
}

void set_constant_c(CoefficientField& k, double value) {
  k.c = [value](double) { return value; };
  k.c_sup = std::abs(value);
  k.c_nonpositive = value <= 0.0;
  k.c_label = "constant(" + fmt(value) + ")";
}

void set_gaussian_well_c(CoefficientField& k, double depth, double width) {
  if (!(depth >= 0.0)) throw HypothesisError("gaussian well c: depth must be nonnegative");
  if (!(width > 0.0)) throw HypothesisError("gaussian well c: width must be positive");
  k.c = [depth, width](double x) {
    const double z = x / width;
    return -depth * std::exp(-z * z);
  };
  k.c_sup = depth;
  k.c_nonpositive = true;
  k.c_label = "gaussian_well(depth=" + fmt(depth) + ",width=" + fmt(width) + ")";
}

void set_bump_f(CoefficientField& k, double amplitude, double radius) {
  if (!(radius > 0.0)) throw HypothesisError("bump f: radius must be positive");
  k.f = [amplitude, radius](double x) {
    const double z = x / radius;
    if (std::abs(z) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - z * z));
  };
  k.f_sup = std::abs(amplitude);
  k.f_label = "bump(amplitude=" + fmt(amplitude) + ",radius=" + fmt(radius) + ")";
}

void set_zero_f(CoefficientField& k) {
  k.f = [](double) { return 0.0; };
  k.f_sup = 0.0;
  k.f_label = "zero";
}

CoefficientField power_law_coefficients(double C0, double alpha, double scale) {
  CoefficientField k;
  set_power_law_a(k, C0, alpha, scale);
  set_constant_c(k, 0.0);
  set_zero_f(k);
  return k;
}

void validate(const CoefficientField& k, int N, double s, double sample_radius) {
  if (!k.a || !k.c || !k.f) throw HypothesisError("coefficients: a, c and f must all be set");
  if (!(k.C0 > 0.0)) throw HypothesisError("coefficients: C0 must be positive");
  if (!(k.alpha > 2.0 * s)) throw HypothesisError("coefficients: need alpha > 2s");
  if (!(static_cast<double>(N) > 2.0 * s)) throw HypothesisError("coefficients: need N > 2s");
  constexpr int kSamples = 4096;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = -sample_radius + 2.0 * sample_radius * i / kSamples;
    const double ax = k.a(x);
    const double lower = k.C0 * std::pow(1.0 + x * x, 0.5 * k.alpha);
    if (!(ax > 0.0) || ax < lower * (1.0 - 1e-12)) {
      throw HypothesisError("coefficients: a violates its lower bound at x = " + fmt(x));
    }
    const double cx = k.c(x);
    if (k.c_nonpositive && cx > 0.0) throw HypothesisError("coefficients: c > 0 at x = " + fmt(x));
    if (std::abs(cx) > k.c_sup * (1.0 + 1e-12)) throw HypothesisError("coefficients: |c| exceeds its sup at x = " + fmt(x));
    if (std::abs(k.f(x)) > k.f_sup * (1.0 + 1e-12)) throw HypothesisError("coefficients: |f| exceeds its sup at x = " + fmt(x));
  }
}

}  // namespace fracinf
