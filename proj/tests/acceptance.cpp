#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fracinf/barriers.hpp"
#include "fracinf/elliptic.hpp"
#include "fracinf/frac_operator.hpp"
#include "fracinf/parabolic.hpp"
#include "support.hpp"

using namespace fracinf;

namespace {

constexpr int kN = 1;
constexpr double kS = 0.25;
constexpr double kAlpha = 1.5;
constexpr double kC0 = 1.0;

int failures = 0;

void line(int id, const std::string& title, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] %2d %-32s %s  (%.1f s)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

CoefficientField bump_problem() {
  CoefficientField k = power_law_coefficients(kC0, kAlpha);
  set_bump_f(k, 1.0, 1.0);
  return k;
}

ParabolicProblem parabolic_problem(const BoundaryTrajectory& g, bool infinite) {
  ParabolicProblem p;
  p.coeffs = bump_problem();
  p.s = kS;
  p.N = kN;
  p.g = g;
  const double g0 = g(0.0);
  p.u0 = [g0](double) { return g0; };
  p.u0_sup = std::abs(g0);
  p.infinite_horizon = infinite;
  validate(p);
  return p;
}

void criterion_1() {
  Timer t;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto q = testing::draw_hyp_params(rng);
    worst = std::max(worst, std::abs(testing::hyp_limit_richardson(q.a, q.b, q.c) - hyp_limit(q.a, q.b, q.c)));
  }
  line(1, "hypergeometric limit", worst <= 1e-6, fmt("max |extrapolated - gamma quotient| = %.3g <= 1e-6", worst),
       t.seconds());
}

void criterion_2() {
  Timer t;
  const ExitTimeSolution w = getoor(1.0, kN, kS);
  const auto grid = Grid1D<double>::with_spacing(1.0, 1.0 / 512.0);
  Eigen::VectorXd u(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) u[i] = w.value(grid.node(i));
  const Eigen::VectorXd Au = apply_discrete(build_discrete_op(grid, kS), u, 0.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.node(i)) > 0.8) continue;
    lo = std::min(lo, Au[i]);
    hi = std::max(hi, Au[i]);
  }
  line(2, "exit-time identity", lo >= 0.97 && hi <= 1.03, fmt("range [%.6f, %.6f] within [0.97, 1.03]", lo, hi),
       t.seconds());
}

struct Shared {
  CoefficientField coeffs;
  DecayBarrierV V;
  GlobalBarrierH h;
};

void criterion_3(const Shared& sh) {
  Timer t;
  const MarginReport m = verify_V_supersolution(sh.V, sh.coeffs, log_radii(sh.V.R0, 1e3 * sh.V.R0, 64));
  line(3, "decay barrier V", m.min_margin >= -1e-6, fmt("min margin %.6g >= -1e-6", m.min_margin), t.seconds());
}

void criterion_4(const Shared& sh) {
  Timer t;
  const MarginReport m = verify_h_supersolution(sh.h, sh.coeffs, certification_grid(sh.h));
  const BarrierSlacks& sl = sh.h.slacks;
  const double min_slack = std::min({sl.lower_321, sl.upper_321, sl.sufficient_326, sl.derivative}) ;
  const bool crossing = sh.h.R_bar > sh.V.R0 && sh.h.R_bar < 0.5 * sh.h.R_hat;
  const int changes = crossing_sign_changes(sh.h, 10000);
  const bool pass = m.min_margin >= 0.95 && min_slack > 0.0 && crossing && changes == 1;
  char buf[256];
  std::snprintf(buf, sizeof buf, "margin %.4g >= 0.95, min slack %.4g > 0, R_bar %.6g in (%.3g, %.3g), sign changes %d",
                m.min_margin, min_slack, sh.h.R_bar, sh.V.R0, 0.5 * sh.h.R_hat, changes);
  line(4, "global barrier h", pass, buf, t.seconds());
}

void criterion_5() {
  Timer t;
  struct Point {
    double beta;
    int N;
    double s;
  };
  const std::vector<Point> lattice = {{0.7, 1, 0.1}, {0.45, 1, 0.25}, {0.18, 1, 0.4},
                                      {1.0, 3, 0.3}, {1.5, 3, 0.5},   {1.2, 3, 0.75}};
  double worst = 0.0;
  for (const auto& q : lattice) {
    const RadialPowerProfile p = calibrated(RadialPowerProfile{1.0, q.beta, q.N, q.s, std::nullopt});
    const SmoothProfile u = power_profile(1.0, q.beta);
    for (double r : {0.0, 0.5, 2.0, 5.0, 20.0}) {
      const double closed = frac_lap_radial_power(p, r);
      const double oracle = frac_lap_quadrature(u, r, q.s, 1e-10 * std::abs(closed) + 1e-14, q.N);
      worst = std::max(worst, std::abs(closed - oracle) / std::abs(oracle));
    }
  }
  line(5, "closed form vs quadrature", worst <= 1e-4, fmt("max relative error %.3g <= 1e-4", worst), t.seconds());
}

NestedResult criterion_6() {
  Timer t;
  double exact_err = 0.0;
  const auto grid = Grid1D<double>::with_spacing(8.0, 0.125);
  {
    EllipticProblem p{power_law_coefficients(kC0, kAlpha), 2.0, kS, kN};
    const SolutionField u = solve_elliptic_ball(p, grid);
    exact_err = std::max(exact_err, (u.values.array() - 2.0).abs().maxCoeff());
  }
  {
    EllipticProblem p{power_law_coefficients(kC0, kAlpha), -1.5, kS, kN};
    set_gaussian_well_c(p.coeffs, 2.0, 1.5);
    const double gamma = p.gamma;
    const auto c = p.coeffs.c;
    p.coeffs.f = [c, gamma](double x) { return -c(x) * gamma; };
    p.coeffs.f_sup = 2.0 * std::abs(gamma);
    const SolutionField u = solve_elliptic_ball(p, grid);
    exact_err = std::max(exact_err, (u.values.array() - gamma).abs().maxCoeff());
  }
  const EllipticProblem p{bump_problem(), 0.0, kS, kN};
  NestedResult nested = elliptic_nested_limit(p, NestedSchedule{8.0, 0.125, 5}, 5.0, 1e-4);
  const double last = nested.trace.empty() ? 0.0 : nested.trace.back();
  const bool mono = decreasing(nested.trace);
  const bool pass = exact_err <= 1e-10 && mono && last < 1e-4;
  char buf[256];
  std::snprintf(buf, sizeof buf, "constant cases %.3g <= 1e-10, trace decreasing %s, final level difference %.4g < 1e-4",
                exact_err, mono ? "yes" : "no", last);
  line(6, "elliptic exactness and nesting", pass, buf, t.seconds());
  return nested;
}

void criterion_7(const Shared& sh, const NestedResult& nested) {
  Timer t;
  const EllipticProblem p{bump_problem(), 0.0, kS, kN};
  const DecayReport d = verify_elliptic_decay(nested.solution, p, sh.h);
  line(7, "elliptic decay bound", d.worst_slack >= 0.0,
       fmt("min (M h + 1e-6 - |u - gamma|) = %.4g >= 0, M = %.3g", d.worst_slack, d.M), t.seconds());
}

void criteria_8_9(const Shared& sh, const BarrierV0& V0) {
  Timer t;
  const ParabolicProblem p = parabolic_problem(sine_g(1.0), true);
  const TimeGrid tg = TimeGrid::make(50.0, 0.05);
  const ParabolicNestedResult nested = parabolic_nested_limit(p, NestedSchedule{8.0, 0.125, 5}, tg, 5.0, 1e-4, 1, &V0);
  const Trajectory& traj = nested.trajectory;
  const double ratio = traj.max_BV0_ratio.value_or(std::numeric_limits<double>::infinity());
  line(8, "parabolic global bound", ratio <= 1.0 + 1e-9, fmt("max |u| / (B V0) = %.4g <= 1 + 1e-9", ratio), t.seconds());

  Timer t9;
  const UniformBoundaryReport ub = verify_uniform_boundary(traj, p, sh.V, std::max(sh.V.R0, 2.0));
  const bool pass = std::isfinite(ub.C_bar) && ub.worst_increase <= 1e-12;
  line(9, "uniform condition at infinity", pass,
       fmt("C_bar = %.4g finite, outer-decade increase %.3g <= 1e-12", ub.C_bar, ub.worst_increase), t9.seconds());
}

void criterion_10(const BarrierV0& V0) {
  Timer t;
  const ParabolicProblem p = parabolic_problem(exp_decay_g(0.0), true);
  const double A = std::max(p.g.sup + p.coeffs.f_sup, p.u0_sup);
  const SandwichReport sw = sandwich(p, constant_g(-p.g.sup), constant_g(p.g.sup), A, V0,
                                     Grid1D<double>::with_spacing(8.0, 0.125), TimeGrid::make(50.0, 0.05));
  const bool pass = sw.lower.worst_violation >= -1e-10 && sw.upper.worst_violation >= -1e-10 && sw.worst_gap >= 0.0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "worst step change sub %.3g, super %.3g >= -1e-10; sandwich gap %.4g >= 0",
                sw.lower.worst_violation, sw.upper.worst_violation, sw.worst_gap);
  line(10, "monotone envelopes", pass, buf, t.seconds());
}

void criterion_11(const BarrierV0& V0) {
  Timer t;
  const ParabolicProblem p = parabolic_problem(exp_decay_g(0.0), true);
  const LongTimeReport lt = long_time_limit(p, NestedSchedule{8.0, 0.125, 5}, 50.0, 0.05, 5.0, 1e-4,
                                            {10.0, 20.0, 30.0, 40.0, 50.0}, &V0);
  const bool mono = decreasing(lt.discrepancy);
  const double final_gap = lt.discrepancy.back();
  char buf[256];
  std::snprintf(buf, sizeof buf, "sup |u(50) - W| = %.3g <= 1e-2, trace decreasing %s", final_gap, mono ? "yes" : "no");
  line(11, "long-time limit", final_gap <= 1e-2 && mono, buf, t.seconds());
}

CoefficientField random_coefficients(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  CoefficientField k;
  set_power_law_a(k, kC0, kAlpha, 1.0 + 2.0 * u01(rng));
  set_gaussian_well_c(k, 2.0 * u01(rng), 0.5 + 2.0 * u01(rng));
  return k;
}

void criterion_12() {
  Timer t;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const auto grid = Grid1D<double>::with_spacing(4.0, 0.125);
  int elliptic_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const CoefficientField base = random_coefficients(rng);
    const double amp = sym(rng), center = 2.0 * sym(rng), width = 0.5 + u01(rng);
    const double lift = u01(rng), gamma = sym(rng), gap = u01(rng);
    EllipticProblem lo{base, gamma, kS, kN};
    EllipticProblem hi{base, gamma + gap, kS, kN};
    lo.coeffs.f = [=](double x) { return amp * testing::bump((x - center) / width); };
    hi.coeffs.f = [=](double x) { return amp * testing::bump((x - center) / width) + lift * testing::bump(x / 3.0); };
    lo.coeffs.f_sup = std::abs(amp);
    hi.coeffs.f_sup = std::abs(amp) + lift;
    const Eigen::VectorXd d = solve_elliptic_ball(hi, grid).values - solve_elliptic_ball(lo, grid).values;
    if (d.minCoeff() < 0.0) ++elliptic_bad;
  }

  int parabolic_bad = 0;
  const TimeGrid tg = TimeGrid::make(2.0, 0.05);
  for (int trial = 0; trial < 100; ++trial) {
    const CoefficientField base = random_coefficients(rng);
    const double amp = sym(rng), lift = u01(rng), freq = 3.0 * u01(rng), shift = u01(rng), g0 = sym(rng);
    ParabolicProblem lo;
    lo.coeffs = base;
    lo.s = kS;
    lo.N = kN;
    lo.coeffs.f = [=](double x) { return amp * testing::bump(x / 2.0); };
    lo.coeffs.f_sup = std::abs(amp);
    lo.g = BoundaryTrajectory{[=](double s) { return g0 + 0.5 * std::sin(freq * s); }, std::abs(g0) + 0.5, std::nullopt,
                              Monotonicity::none, "lower"};
    ParabolicProblem hi = lo;
    hi.coeffs.f = [=](double x) { return amp * testing::bump(x / 2.0) + lift * testing::bump(x); };
    hi.coeffs.f_sup = std::abs(amp) + lift;
    hi.g.g = [=](double s) { return g0 + 0.5 * std::sin(freq * s) + shift * (1.0 + std::cos(s)); };
    hi.g.sup = std::abs(g0) + 0.5 + 2.0 * shift;
    Eigen::VectorXd u0(grid.size()), v0(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double x = grid.node(i);
      u0[i] = lo.g(0.0) + sym(rng) * testing::bump(x / 3.0);
      v0[i] = u0[i] + u01(rng) * testing::bump(x / 3.0);
    }
    lo.u0 = [g = lo.g](double) { return g(0.0); };
    hi.u0 = [g = hi.g](double) { return g(0.0); };
    lo.u0_sup = u0.cwiseAbs().maxCoeff();
    hi.u0_sup = v0.cwiseAbs().maxCoeff();
    RunOptions ou, ov;
    ou.initial = u0;
    ov.initial = v0;
    const Trajectory a = solve_parabolic_ball(lo, tg, grid, ou);
    const Trajectory b = solve_parabolic_ball(hi, tg, grid, ov);
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      if ((b.states[k] - a.states[k]).minCoeff() < 0.0) {
        ++parabolic_bad;
        break;
      }
    }
  }
  line(12, "comparison principles", elliptic_bad == 0 && parabolic_bad == 0,
       fmt("ordering violations: elliptic %.0f / 100, parabolic %.0f / 100", elliptic_bad, parabolic_bad), t.seconds());
}

}  // namespace

int main() {
  Shared sh;
  sh.coeffs = power_law_coefficients(kC0, kAlpha);
  sh.V = select_V_params(kN, kS, sh.coeffs);
  sh.h = assemble_global_barrier(kN, kS, sh.coeffs, sh.V);
  const BarrierV0 V0 = build_V0(sh.h);

  const std::vector<std::function<void()>> steps = {
      criterion_1,
      criterion_2,
      [&] { criterion_3(sh); },
      [&] { criterion_4(sh); },
      criterion_5,
      [&] {
        const NestedResult nested = criterion_6();
        criterion_7(sh, nested);
      },
      [&] { criteria_8_9(sh, V0); },
      [&] { criterion_10(V0); },
      [&] { criterion_11(V0); },
      criterion_12,
  };
  for (const auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::printf("[FAIL] error: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
