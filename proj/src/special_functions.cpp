#include "fracinf/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracinf/errors.hpp"

namespace fracinf {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double x) {
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (x + static_cast<double>(i));
  return sum;
}

// Gamma for any non-pole real argument.
double gamma_unchecked(double t) {
  using std::numbers::pi;
  if (t < 0.5) return pi / (std::sin(pi * t) * gamma_unchecked(1.0 - t));
  const double x = t - 1.0;
  const double base = x + kLanczosG + 0.5;
  // Split the power so that base^(x+1/2) does not overflow before exp(-base)
  // brings it back into range near t = 170.
  const double half = std::pow(base, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * pi) * half * (half * std::exp(-base)) * lanczos_sum(x);
}

constexpr double kSeriesTol = 1e-16;
constexpr int kSeriesCap = 10000;
constexpr int kTaylorCap = 4000;

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

struct ValueAndSlope {
  double value;
  double slope;
};

// Power series of F and F' about z = 0.
ValueAndSlope series_with_slope(double a, double b, double c, double z) {
  double term = 1.0;  // (a)_n (b)_n / ((c)_n n!) z^n
  double value = 1.0;
  double slope = 0.0;
  int small_in_row = 0;
  for (int n = 0; n < kSeriesCap; ++n) {
    const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0));
    const double next = term * ratio * z;
    // d/dz of the (n+1)-th term is (n+1) * next / z; accumulate without dividing by z.
    const double dnext = term * ratio * (n + 1.0);
    value += next;
    slope += dnext;
    if (next == 0.0 && dnext == 0.0) return {value, slope};  // terminating series
    const bool small = std::abs(next) <= kSeriesTol * std::abs(value) &&
                       std::abs(dnext * z) <= kSeriesTol * (std::abs(slope * z) + std::abs(value));
    small_in_row = small ? small_in_row + 1 : 0;
    if (small_in_row >= 2) return {value, slope};
    term = next;
  }
  std::ostringstream msg;
  msg << "hyp2f1 series did not converge within " << kSeriesCap << " terms at z=" << z;
  throw AccuracyError(msg.str(), value, std::abs(term));
}

// One Taylor step of the hypergeometric ODE
//   z(1-z) F'' + [c - (a+b+1) z] F' - ab F = 0
// from z0 to z0 + dz, |dz| < distance to the nearest singular point.
ValueAndSlope taylor_step(double a, double b, double c, double z0, ValueAndSlope at, double dz) {
  const double p0 = z0 * (1.0 - z0);
  const double p1 = 1.0 - 2.0 * z0;
  const double q0 = c - (a + b + 1.0) * z0;
  const double q1 = -(a + b + 1.0);
  const double ab = a * b;

  // d_k = c_k dz^k keeps the coefficients bounded when 1 - z0 is tiny.
  double dk = at.value;
  double dk1 = at.slope * dz;
  double value = dk + dk1;
  double slope = at.slope;
  int small_in_row = 0;
  for (int k = 0; k < kTaylorCap; ++k) {
    const double kk = static_cast<double>(k);
    const double dk2 = -((p1 * kk + q0) * (kk + 1.0) * dk1 * dz + (-kk * (kk - 1.0) + q1 * kk - ab) * dk * dz * dz) /
                       (p0 * (kk + 2.0) * (kk + 1.0));
    const double dslope = (kk + 2.0) * dk2 / dz;
    value += dk2;
    slope += dslope;
    const bool small = std::abs(dk2) <= 1e-17 * std::abs(value) &&
                       std::abs(dslope) <= 1e-17 * std::abs(slope) + 1e-300;
    small_in_row = small ? small_in_row + 1 : 0;
    if (small_in_row >= 3) return {value, slope};
    dk = dk1;
    dk1 = dk2;
  }
  throw AccuracyError("hyp2f1 analytic continuation step did not converge", value, std::abs(dk1));
}

double hyp2f1_unit_interval(double a, double b, double c, double z) {
  constexpr double kSwitch = 0.5;
  if (z < kSwitch || is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    return series_with_slope(a, b, c, z).value;
  }
  ValueAndSlope state = series_with_slope(a, b, c, kSwitch);
  double zk = kSwitch;
  // Each step covers at most half the remaining distance to z = 1, so every
  // local expansion converges at least like 2^{-k}.
  constexpr double kStepFraction = 0.5;
  while (zk < z) {
    const double dz = std::min(z - zk, kStepFraction * (1.0 - zk));
    state = taylor_step(a, b, c, zk, state, dz);
    zk = (dz == z - zk) ? z : zk + dz;
  }
  return state.value;
}

}  // namespace

double gamma(double t) {
  if (!(t > 0.0)) {
    std::ostringstream msg;
    msg << "gamma: argument must be positive, got " << t;
    throw DomainError(msg.str());
  }
  return gamma_unchecked(t);
}

double log_gamma(double t) {
  if (!(t > 0.0)) throw DomainError("log_gamma: argument must be positive");
  if (t < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * t)) - log_gamma(1.0 - t);
  const double x = t - 1.0;
  const double base = x + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(base) - base +
         std::log(lanczos_sum(x));
}

double hyp2f1(const Hyp2F1Query& q) {
  if (!(q.z < 1.0)) throw DomainError("hyp2f1: requires z < 1");
  if (!(q.c > 0.0)) throw DomainError("hyp2f1: requires c > 0 (c must not be a nonpositive integer)");
  if (q.z == 0.0 || q.a == 0.0 || q.b == 0.0) return 1.0;
  if (q.z < 0.0) {
    const double w = q.z / (q.z - 1.0);
    return std::pow(1.0 - q.z, -q.b) * hyp2f1_unit_interval(q.c - q.a, q.b, q.c, w);
  }
  return hyp2f1_unit_interval(q.a, q.b, q.c, q.z);
}

double hyp_limit(double a, double b, double c) {
  const double d = c - a - b;
  if (!(c > 0.0) || !(d > 0.0) || !(c - a > 0.0) || !(c - b > 0.0)) {
    std::ostringstream msg;
    msg << "hyp_limit: need c, c-a-b, c-a, c-b > 0 (a=" << a << ", b=" << b << ", c=" << c << ")";
    throw DomainError(msg.str());
  }
  if (c < 150.0 && d < 150.0 && c - a < 150.0 && c - b < 150.0) {
    return gamma(c) * gamma(d) / (gamma(c - a) * gamma(c - b));
  }
  return std::exp(log_gamma(c) + log_gamma(d) - log_gamma(c - a) - log_gamma(c - b));
}

double c_ns(int N, double s) {
  if (N < 1) throw DomainError("c_ns: dimension must be positive");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("c_ns: s must lie in (0, 1)");
  const double n = static_cast<double>(N);
  return std::pow(2.0, 2.0 * s) * s * gamma(0.5 * (n + 2.0 * s)) /
         (std::pow(std::numbers::pi, 0.5 * n) * gamma(1.0 - s));
}

double unit_sphere_measure(int N) {
  if (N < 1) throw DomainError("unit_sphere_measure: dimension must be positive");
  const double n = static_cast<double>(N);
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma(0.5 * n);
}

}  // namespace fracinf
