#include "fracinf/frac_operator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracinf/quadrature.hpp"

namespace fracinf {

namespace {

constexpr double kNear = 0.5;        // near-field radius rho_0
constexpr double kNegligible = 1e-3;  // fraction of rho_0 below which the regularised bracket is dropped

// Running sum of quadrature pieces.
struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;

  void add(const QuadratureResult& r, double factor = 1.0) {
    value += factor * r.value;
    error += std::abs(factor) * r.error;
    converged = converged && r.converged;
  }
  void add_exact(double v) { value += v; }
};

QuadratureOptions options_for(double abs_tol) {
  QuadratureOptions o;
  o.abs_tol = abs_tol;
  o.rel_tol = 1e-14;
  o.max_subdivisions = 4000;
  return o;
}

// int_R^inf F(rho) rho^{-1-2s} drho via rho = R v^{-1/(2s)}.
QuadratureResult tail_integral(const std::function<double(double)>& F, double R, double s,
                               double abs_tol, Accumulator& acc) {
  const double factor = std::pow(R, -2.0 * s) / (2.0 * s);
  auto g = [&](double v) { return F(R * std::pow(v, -0.5 / s)); };
  QuadratureResult r = integrate(g, 0.0, 1.0, options_for(abs_tol / factor));
  acc.add(r, factor);
  return r;
}

[[noreturn]] void fail(const char* what, const Accumulator& acc) {
  std::ostringstream msg;
  msg << what << ": tolerance not reached (estimate " << acc.value << ", error bound " << acc.error << ")";
  throw AccuracyError(msg.str(), acc.value, acc.error);
}

double quadrature_1d(const SmoothProfile& u, double x, double s, double tol) {
  const double cn = c_ns(1, s);
  const double piece_tol = tol / (3.0 * cn);
  const double ux = u.value(x);
  const double u2 = u.d2(x);
  Accumulator acc;

  auto bracket = [&](double t) {
    if (!std::isfinite(t)) return 2.0 * (ux - u.limit);
    return 2.0 * ux - u.value(x + t) - u.value(x - t);
  };
  auto near = [&](double t) {
    if (t < kNegligible * kNear) return 0.0;
    return (bracket(t) + u2 * t * t) * std::pow(t, -1.0 - 2.0 * s);
  };
  acc.add(integrate(near, 0.0, kNear, options_for(piece_tol)));
  acc.add_exact(-u2 * std::pow(kNear, 2.0 - 2.0 * s) / (2.0 - 2.0 * s));

  const double far = std::max(8.0, 4.0 * std::abs(x));
  auto mid = [&](double t) { return bracket(t) * std::pow(t, -1.0 - 2.0 * s); };
  acc.add(integrate(mid, kNear, far, options_for(piece_tol)));
  tail_integral(bracket, far, s, piece_tol, acc);

  acc.value *= cn;
  acc.error *= cn;
  if (!acc.converged) fail("frac_lap_quadrature", acc);
  return acc.value;
}

// Radial reduction about the origin: C |S^{N-1}| int_0^inf (u(0) - u(rho)) rho^{-1-2s}.
double quadrature_origin(const SmoothProfile& u, int N, double s, double tol) {
  const double factor = c_ns(N, s) * unit_sphere_measure(N);
  const double piece_tol = tol / (3.0 * factor);
  const double u0 = u.value(0.0);
  const double half_u2 = 0.5 * u.d2(0.0);
  Accumulator acc;
  auto diff = [&](double rho) {
    if (!std::isfinite(rho)) return u0 - u.limit;
    return u0 - u.value(rho);
  };
  auto near = [&](double rho) {
    if (rho < kNegligible * kNear) return 0.0;
    return (diff(rho) + half_u2 * rho * rho) * std::pow(rho, -1.0 - 2.0 * s);
  };
  acc.add(integrate(near, 0.0, kNear, options_for(piece_tol)));
  acc.add_exact(-half_u2 * std::pow(kNear, 2.0 - 2.0 * s) / (2.0 - 2.0 * s));
  auto mid = [&](double rho) { return diff(rho) * std::pow(rho, -1.0 - 2.0 * s); };
  acc.add(integrate(mid, kNear, 8.0, options_for(piece_tol)));
  tail_integral(diff, 8.0, s, piece_tol, acc);
  acc.value *= factor;
  acc.error *= factor;
  if (!acc.converged) fail("frac_lap_quadrature", acc);
  return acc.value;
}

// N = 3, radial u, r0 > 0. With phi(rho) = (u(r0) - u(rho)) rho:
//   (-Delta)^s u(r0) = C 2pi / ((1+2s) r0) int_0^inf phi(rho) [|r0-rho|^{-1-2s} - (r0+rho)^{-1-2s}] drho.
double quadrature_radial3(const SmoothProfile& u, double r0, double s, double tol) {
  const double p = 1.0 + 2.0 * s;
  const double factor = c_ns(3, s) * 2.0 * std::numbers::pi / (p * r0);
  const double piece_tol = tol / (5.0 * factor);
  const double ur = u.value(r0);
  const double phi2 = -u.d2(r0) * r0 - 2.0 * u.d1(r0);
  Accumulator acc;

  auto phi = [&](double rho) { return (ur - u.value(rho)) * rho; };

  // Singular part, folded about r0.
  const double rho0 = std::min(kNear, r0);
  auto folded = [&](double t) { return phi(r0 + t) + phi(r0 - t); };
  auto near = [&](double t) {
    if (t < kNegligible * rho0) return 0.0;
    return (folded(t) - phi2 * t * t) * std::pow(t, -p);
  };
  acc.add(integrate(near, 0.0, rho0, options_for(piece_tol)));
  acc.add_exact(phi2 * std::pow(rho0, 2.0 - 2.0 * s) / (2.0 - 2.0 * s));
  if (rho0 < r0) {
    auto mid = [&](double t) { return folded(t) * std::pow(t, -p); };
    acc.add(integrate(mid, rho0, r0, options_for(piece_tol)));
  }

  // rho > 2 r0: both kernels together, rho^{-p} [(1-q)^{-p} - (1+q)^{-p}], q = r0/rho.
  auto combined = [&](double rho) {
    if (!std::isfinite(rho)) return (ur - u.limit) * 2.0 * p * r0;
    const double q = r0 / rho;
    const double lp = std::log1p(q);
    const double lm = std::log1p(-q);
    const double dn = std::exp(-p * lp) * std::expm1(-p * (lm - lp));
    return (ur - u.value(rho)) * rho * dn;
  };
  const double far = std::max(2.0 * r0, 8.0);
  if (far > 2.0 * r0) {
    auto mid = [&](double rho) { return combined(rho) * std::pow(rho, -p); };
    acc.add(integrate(mid, 2.0 * r0, far, options_for(piece_tol)));
  }
  tail_integral(combined, far, s, piece_tol, acc);

  // Regular part on [0, 2 r0].
  auto regular = [&](double rho) { return phi(rho) * std::pow(r0 + rho, -p); };
  acc.add(integrate(regular, 0.0, 2.0 * r0, options_for(piece_tol)), -1.0);

  acc.value *= factor;
  acc.error *= factor;
  if (!acc.converged) fail("frac_lap_quadrature", acc);
  return acc.value;
}

}  // namespace

SmoothProfile power_profile(double C, double beta) {
  SmoothProfile u;
  u.value = [C, beta](double x) { return C * std::pow(1.0 + x * x, -0.5 * beta); };
  u.d1 = [C, beta](double x) { return -C * beta * x * std::pow(1.0 + x * x, -0.5 * beta - 1.0); };
  u.d2 = [C, beta](double x) {
    const double q = 1.0 + x * x;
    return C * (-beta * std::pow(q, -0.5 * beta - 1.0) + beta * (beta + 2.0) * x * x * std::pow(q, -0.5 * beta - 2.0));
  };
  u.limit = 0.0;
  return u;
}

SmoothProfile constant_profile(double k) {
  SmoothProfile u;
  u.value = [k](double) { return k; };
  u.d1 = [](double) { return 0.0; };
  u.d2 = [](double) { return 0.0; };
  u.limit = k;
  return u;
}

SmoothProfile gaussian_profile() {
  SmoothProfile u;
  u.value = [](double x) { return std::exp(-x * x); };
  u.d1 = [](double x) { return -2.0 * x * std::exp(-x * x); };
  u.d2 = [](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); };
  u.limit = 0.0;
  return u;
}

double frac_lap_quadrature(const SmoothProfile& u, double x, double s, double tol, int N) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("frac_lap_quadrature: s must lie in (0, 1)");
  if (!(tol > 0.0)) throw DomainError("frac_lap_quadrature: tol must be positive");
  if (N == 1) return quadrature_1d(u, x, s, tol);
  if (N == 3) {
    if (x < 0.0) throw DomainError("frac_lap_quadrature: radius must be nonnegative");
    return x == 0.0 ? quadrature_origin(u, 3, s, tol) : quadrature_radial3(u, x, s, tol);
  }
  throw DomainError("frac_lap_quadrature: only N = 1 and N = 3 are supported");
}

double calibrate_fv_constant(double beta, int N, double s) {
  if (!(beta > 0.0)) throw DomainError("calibrate_fv_constant: beta must be positive");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("calibrate_fv_constant: s must lie in (0, 1)");
  // 1 - (1+rho^2)^{-beta/2}, accurate for small rho.
  auto g = [beta](double rho) { return -std::expm1(-0.5 * beta * std::log1p(rho * rho)); };
  QuadratureOptions o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-13;
  o.max_subdivisions = 4000;
  Accumulator acc;
  // [0, 1] with v = rho^{2-2s}:  int g rho^{-1-2s} drho = int_0^1 (g / rho^2) / (2-2s) dv.
  auto inner = [&](double v) {
    const double rho = std::pow(v, 1.0 / (2.0 - 2.0 * s));
    const double ratio = rho < 1e-4 ? 0.5 * beta * (1.0 - 0.25 * (beta + 2.0) * rho * rho) : g(rho) / (rho * rho);
    return ratio / (2.0 - 2.0 * s);
  };
  acc.add(integrate(inner, 0.0, 1.0, o));
  // [1, inf) with v = rho^{-2s}.
  auto outer = [&](double v) {
    const double rho = std::pow(v, -0.5 / s);
    return std::isfinite(rho) ? g(rho) : 1.0;
  };
  acc.add(integrate(outer, 0.0, 1.0, o), 1.0 / (2.0 * s));
  const double factor = c_ns(N, s) * unit_sphere_measure(N);
  acc.value *= factor;
  acc.error *= factor;
  if (!acc.converged) fail("calibrate_fv_constant", acc);
  return acc.value;
}

double calibrate_fv_by_matching(double beta, int N, double s, double r) {
  const double z = r * r / (1.0 + r * r);
  const double shape = std::pow(1.0 + r * r, -0.5 * beta - s) * hyp2f1(-s, 0.5 * beta + s, 0.5 * N, z);
  const double tol = 1e-10 * std::abs(shape);
  return frac_lap_quadrature(power_profile(1.0, beta), r, s, tol, N) / shape;
}

RadialPowerProfile calibrated(RadialPowerProfile p) {
  p.fv_const = calibrate_fv_constant(p.beta, p.N, p.s);
  return p;
}

double frac_lap_radial_power(const RadialPowerProfile& p, double r) {
  if (!p.fv_const) throw StateError("frac_lap_radial_power: fv_const has not been calibrated");
  if (!(r >= 0.0)) throw DomainError("frac_lap_radial_power: radius must be nonnegative");
  const double r2 = r * r;
  const double z = r2 / (1.0 + r2);
  return p.C * *p.fv_const * std::pow(1.0 + r2, -0.5 * p.beta - p.s) *
         hyp2f1(-p.s, 0.5 * p.beta + p.s, 0.5 * p.N, z);
}

Eigen::VectorXd apply_discrete(const DiscreteFracOp& op, const Eigen::VectorXd& field,
                               const std::function<double(double)>& exterior) {
  const Eigen::Index n = op.size();
  if (field.size() != n) throw DomainError("apply_discrete: field length does not match the grid");
  const double L = op.grid().half_width();
  const double s = op.s();
  const double gl = exterior(-L);
  const double gr = exterior(L);
  const auto& w = op.offset_weights();
  const auto& tails = op.tail_coefficients();
  const auto& edges = op.boundary_weights();
  QuadratureOptions o;
  o.abs_tol = 0.0;
  o.rel_tol = 1e-12;
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = op.grid().node(i);
    const double dl = L + xi;
    const double dr = L - xi;
    // Mean of g over each exterior half-line with respect to the normalised kernel.
    auto left = [&](double v) { return exterior(xi - dl * std::pow(v, -0.5 / s)); };
    auto right = [&](double v) { return exterior(xi + dr * std::pow(v, -0.5 / s)); };
    const double mean_l = integrate_or_throw(left, 0.0, 1.0, o, "apply_discrete (left tail)");
    const double mean_r = integrate_or_throw(right, 0.0, 1.0, o, "apply_discrete (right tail)");
    const double ui = field[i];
    double acc = edges(i, 0) * (ui - gl) + tails(i, 0) * (ui - mean_l) + edges(i, 1) * (ui - gr) +
                 tails(i, 1) * (ui - mean_r);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) acc += w[i > j ? i - j : j - i] * (ui - field[j]);
    }
    out[i] = op.normalization() * acc;
  }
  return out;
}

}  // namespace fracinf
