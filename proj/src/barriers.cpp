#include "fracinf/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracinf/errors.hpp"
#include "fracinf/special_functions.hpp"

namespace fracinf {

namespace {

constexpr double kTight = 1.0 + 1e-9;

std::string describe(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// mu0 * max over |x| <= R of 1/a, from 4096 uniform samples plus twice the
// half-gap bound on the variation between samples.
double inverse_a_bound(const CoefficientField& coeffs, double R) {
  constexpr int kSamples = 4096;
  double best = 0.0;
  double jump = 0.0;
  double prev = 1.0 / coeffs.a(-R);
  for (int i = 0; i <= kSamples; ++i) {
    const double x = -R + 2.0 * R * i / kSamples;
    const double v = 1.0 / coeffs.a(x);
    best = std::max(best, v);
    jump = std::max(jump, std::abs(v - prev));
    prev = v;
  }
  return best + 2.0 * 0.5 * jump;
}

}  // namespace

DecayBarrierV select_V_params(int N, double s, const CoefficientField& coeffs) {
  const double n = static_cast<double>(N);
  if (!(n > 2.0 * s)) throw HypothesisError("select_V_params: need N > 2s");
  if (!(coeffs.alpha > 2.0 * s)) throw HypothesisError("select_V_params: need alpha > 2s");
  if (!(coeffs.C0 > 0.0)) throw HypothesisError("select_V_params: need C0 > 0");

  DecayBarrierV V;
  const double beta = std::min(0.9 * (n - 2.0 * s), coeffs.alpha - 2.0 * s);
  V.K = hyp_limit(-s, 0.5 * beta + s, 0.5 * n);
  V.profile.beta = beta;
  V.profile.N = N;
  V.profile.s = s;
  V.profile.fv_const = calibrate_fv_constant(beta, N, s);
  V.profile.C = 2.0 / (coeffs.C0 * *V.profile.fv_const * V.K) * kTight;

  // Sample F on 8 points per octave of [1, 2^24]; R0 is the first scan
  // radius beyond which every sample clears K/2.
  constexpr int kOctaves = 24;
  constexpr int kPerOctave = 8;
  std::vector<double> radii;
  std::vector<bool> ok;
  for (int i = 0; i <= kOctaves * kPerOctave; ++i) {
    const double r = std::exp2(static_cast<double>(i) / kPerOctave);
    const double z = 1.0 - 1.0 / (1.0 + r * r);
    radii.push_back(r);
    ok.push_back(hyp2f1(-s, 0.5 * beta + s, 0.5 * n, z) >= 0.5 * V.K);
  }
  for (int k = 0; k < kOctaves; ++k) {
    const std::size_t start = static_cast<std::size_t>(k * kPerOctave);
    if (std::all_of(ok.begin() + static_cast<std::ptrdiff_t>(start), ok.end(), [](bool b) { return b; })) {
      V.R0 = radii[start];
      return V;
    }
  }
  throw ConstructionError("select_V_params: doubling scan exhausted without locating R0");
}

std::vector<double> log_radii(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi >= lo) || count < 1) throw DomainError("log_radii: need 0 < lo <= hi and count >= 1");
  std::vector<double> r(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    r[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, t);
  }
  r.back() = hi;
  return r;
}

MarginReport verify_V_supersolution(const DecayBarrierV& V, const CoefficientField& coeffs,
                                    const std::vector<double>& radii) {
  MarginReport rep;
  rep.threshold = -1e-6;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const double m = coeffs.a(r) * V.frac_lap(r) - 1.0;
    rep.points.push_back(r);
    rep.margins.push_back(m);
    if (m < rep.min_margin) {
      rep.min_margin = m;
      rep.argmin = r;
    }
  }
  rep.pass = !radii.empty() && rep.min_margin >= rep.threshold;
  return rep;
}

ExitTimeSolution getoor(double R_hat, int N, double s) {
  if (!(R_hat > 0.0)) throw DomainError("getoor: radius must be positive");
  if (N < 1) throw DomainError("getoor: dimension must be positive");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("getoor: s must lie in (0, 1)");
  const double n = static_cast<double>(N);
  ExitTimeSolution w;
  w.R_hat = R_hat;
  w.N = N;
  w.s = s;
  w.C1 = gamma(0.5 * n) / (std::pow(4.0, s) * gamma(0.5 * n + s) * gamma(1.0 + s));
  return w;
}

double find_crossing(const std::function<double(double)>& V_tilde, const std::function<double(double)>& W,
                     double lo, double hi, double scale) {
  const double dlo = V_tilde(lo) - W(lo);
  const double dhi = V_tilde(hi) - W(hi);
  if (!(dlo > 0.0 && dhi < 0.0)) {
    throw ConstructionError("find_crossing: V~ - W does not change sign from + to - on [" + describe(lo) + ", " +
                            describe(hi) + "]");
  }
  const double stop = 1e-12 * scale;
  while (hi - lo > stop) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double d = V_tilde(mid) - W(mid);
    if (d > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GlobalBarrierH assemble_global_barrier(int N, double s, const CoefficientField& coeffs,
                                       const DecayBarrierV& V, double mu0) {
  if (!(mu0 > 0.0)) throw DomainError("assemble_global_barrier: mu0 must be positive");
  GlobalBarrierH h;
  h.V = V;
  h.mu0 = mu0;
  const double beta = V.beta();
  h.delta = 0.5 * beta;
  h.nu = std::max(0.0, beta - s + 2.0) + 1.0;

  const double C = V.C();
  double R = 2.0 * std::max(2.0, 2.0 * V.R0);
  constexpr double kLast = 1073741824.0;  // 2^30
  for (; R <= kLast; R *= 2.0) {
    GlobalBarrierH t = h;
    t.R_hat = R;
    t.W_hat = getoor(R, N, s);
    t.vbar_scale = std::pow(R, s + t.nu);
    t.mu2 = std::pow(R, s + t.nu - beta + t.delta);
    t.mu1 = mu0 * inverse_a_bound(coeffs, R) * kTight;
    t.final_scale = std::max(1.0 / mu0, 1.0 / t.vbar_scale);

    BarrierSlacks& sl = t.slacks;
    sl.lower_321 = t.mu2 - t.vbar_scale * C * std::pow(1.0 + 0.25 * R * R, -0.5 * beta);
    sl.upper_321 = t.vbar_scale * C - t.mu1 * t.W_hat.value(0.0) - t.mu2;
    sl.sufficient_326 = beta * t.mu2 - s * t.mu1 * t.W_hat.C1 * (1.0 + R * R);
    const std::string tag = "R_hat=" + describe(R) + ": ";
    if (!(sl.lower_321 > 0.0)) {
      h.attempts.push_back(tag + "lower side of the two-sided mu2 bound fails (slack " + describe(sl.lower_321) + ")");
      continue;
    }
    if (!(sl.upper_321 > 0.0)) {
      h.attempts.push_back(tag + "upper side of the two-sided mu2 bound fails (slack " + describe(sl.upper_321) + ")");
      continue;
    }
    auto vt = [&t](double r) { return t.V_tilde(r); };
    auto w = [&t](double r) { return t.W(r); };
    try {
      t.R_bar = find_crossing(vt, w, V.R0, 0.5 * R, R);
    } catch (const ConstructionError& e) {
      h.attempts.push_back(tag + e.what());
      continue;
    }
    sl.crossing_inner = t.R_bar - V.R0;
    sl.crossing_outer = 0.5 * R - t.R_bar;
    sl.derivative = t.mu1 * t.W_hat.derivative(t.R_bar) - t.vbar_scale * V.derivative(t.R_bar);
    if (!(sl.crossing_inner > 0.0 && sl.crossing_outer > 0.0)) {
      h.attempts.push_back(tag + "crossing radius " + describe(t.R_bar) + " outside (R0, R_hat/2)");
      continue;
    }
    if (!(sl.derivative > 0.0)) {
      h.attempts.push_back(tag + "derivative condition W' > V~' fails at the crossing");
      continue;
    }
    if (!(sl.sufficient_326 > 0.0)) {
      h.attempts.push_back(tag + "sufficient inequality s mu1 C1 (1+R^2) <= beta mu2 fails");
      continue;
    }
    t.attempts = h.attempts;
    return t;
  }
  std::string msg = "assemble_global_barrier: schedule exhausted (R_hat > 2^30)";
  if (!h.attempts.empty()) msg += "; last failure: " + h.attempts.back();
  throw ConstructionError(msg);
}

int crossing_sign_changes(const GlobalBarrierH& h, int samples) {
  int changes = 0;
  int prev = 0;
  for (int i = 1; i < samples; ++i) {
    const double r = h.R_hat * i / samples;
    const double d = h.V_tilde(r) - h.W(r);
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign != 0 && prev != 0 && sign != prev) ++changes;
    if (sign != 0) prev = sign;
  }
  return changes;
}

Grid1D<double> certification_grid(const GlobalBarrierH& h) { return Grid1D<double>(4.0 * h.R_hat, 4095); }

MarginReport verify_h_supersolution(const GlobalBarrierH& h, const CoefficientField& coeffs,
                                    const Grid1D<double>& grid) {
  if (h.V.profile.N != 1) throw DomainError("verify_h_supersolution: grid check needs N = 1");
  if (grid.half_width() < 4.0 * h.R_hat * (1.0 - 1e-12)) {
    throw DomainError("verify_h_supersolution: grid half width must be at least 4 R_hat");
  }
  const DiscreteFracOp op = build_discrete_op(grid, h.V.profile.s);
  // Shift by the plateau value so that the W branch keeps its relative precision.
  const double shift = h.final_scale * h.mu2;
  Eigen::VectorXd u(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) u[i] = h.value(grid.node(i)) - shift;
  auto exterior = [&h, shift](double y) { return h.value(std::abs(y)) - shift; };
  const Eigen::VectorXd Au = apply_discrete(op, u, exterior);

  MarginReport rep;
  rep.threshold = 0.95;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    const double m = coeffs.a(x) * Au[i];
    rep.points.push_back(x);
    rep.margins.push_back(m);
    if (m < rep.min_margin) {
      rep.min_margin = m;
      rep.argmin = x;
    }
  }
  rep.pass = rep.min_margin >= rep.threshold;
  return rep;
}

BarrierV0 build_V0(const GlobalBarrierH& h) { return BarrierV0{h}; }

}  // namespace fracinf
