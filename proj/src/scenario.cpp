#include "fracinf/scenario.hpp"

#include <cmath>
#include <future>

#include "fracinf/barriers.hpp"
#include "fracinf/elliptic.hpp"
#include "fracinf/errors.hpp"

namespace fracinf {

namespace {

double bump(double z) { return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0; }

double effective_tol(const ScenarioConfig& c, const RunSettings& s) { return s.tol.value_or(c.tol); }

NestedSchedule schedule_of(const ScenarioConfig& c) { return NestedSchedule{c.L0, c.dx, c.levels}; }

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

struct Barriers {
  DecayBarrierV V;
  GlobalBarrierH h;
};

Barriers build_barriers(const ScenarioConfig& c, const CoefficientField& k) {
  Barriers b{select_V_params(c.N, c.s, k), {}};
  b.h = assemble_global_barrier(c.N, c.s, k, b.V);
  return b;
}

void add_barrier_parameters(Report& r, const Barriers& b) {
  r.parameters.emplace_back("beta", b.V.beta());
  r.parameters.emplace_back("K", b.V.K);
  r.parameters.emplace_back("fv_const", b.V.fv_const());
  r.parameters.emplace_back("C", b.V.C());
  r.parameters.emplace_back("R0", b.V.R0);
  r.parameters.emplace_back("R_hat", b.h.R_hat);
  r.parameters.emplace_back("R_bar", b.h.R_bar);
  r.parameters.emplace_back("mu0", b.h.mu0);
  r.parameters.emplace_back("mu1", b.h.mu1);
  r.parameters.emplace_back("mu2", b.h.mu2);
  r.parameters.emplace_back("vbar_scale", b.h.vbar_scale);
  r.parameters.emplace_back("C_bar", b.h.final_scale);
  r.parameters.emplace_back("nu", b.h.nu);
  r.parameters.emplace_back("delta", b.h.delta);
  r.parameters.emplace_back("C1", b.h.W_hat.C1);
}

}  // namespace

CoefficientField make_coefficients(const ScenarioConfig& c) {
  CoefficientField k;
  set_power_law_a(k, c.C0, c.alpha, c.a_scale);
  if (c.c_family == "gaussian_well") set_gaussian_well_c(k, c.c_depth, c.c_width);
  else set_constant_c(k, c.c_value);
  if (c.f_family == "bump") set_bump_f(k, c.f_amplitude, c.f_radius);
  else set_zero_f(k);
  return k;
}

ParabolicProblem make_parabolic_problem(const ScenarioConfig& c, bool asymptotic) {
  ParabolicProblem p;
  p.coeffs = make_coefficients(c);
  p.s = c.s;
  p.N = c.N;
  const std::string family = asymptotic ? c.asymptotic_g : c.parabolic_g;
  if (family == "constant") p.g = constant_g(c.gamma);
  else if (family == "sine") p.g = sine_g(c.g_amplitude);
  else if (family == "sin_decay") p.g = sin_decay_g(c.gamma);
  else p.g = exp_decay_g(c.gamma);
  const double g0 = p.g(0.0);
  const double amp = c.u0_amplitude;
  const double radius = c.u0_radius;
  p.u0 = [g0, amp, radius](double x) { return g0 + amp * bump(x / radius); };
  p.u0_sup = std::abs(g0) + std::abs(amp);
  p.infinite_horizon = asymptotic || c.infinite_horizon;
  validate(p);
  return p;
}

Report run_barriers(const ScenarioConfig& c, const RunSettings& settings) {
  Report r;
  r.scenario = "barriers";
  const CoefficientField k = make_coefficients(c);
  validate(k, c.N, c.s);
  const Barriers b = build_barriers(c, k);
  add_barrier_parameters(r, b);

  const MarginReport vm = verify_V_supersolution(b.V, k, log_radii(b.V.R0, 1e3 * b.V.R0, 64));
  r.certificates.push_back(make_certificate("V.min_margin", "decay barrier supersolution a (-Delta)^s V >= 1",
                                            vm.min_margin, ">=", -1e-6));
  const BarrierSlacks& sl = b.h.slacks;
  r.certificates.push_back(make_certificate("h.slack_mu2_lower", "two-sided mu2 bound, lower side", sl.lower_321, ">", 0.0));
  r.certificates.push_back(make_certificate("h.slack_mu2_upper", "two-sided mu2 bound, upper side", sl.upper_321, ">", 0.0));
  r.certificates.push_back(make_certificate("h.slack_sufficient", "sufficient inequality s mu1 C1 (1+R^2) <= beta mu2",
                                            sl.sufficient_326, ">", 0.0));
  r.certificates.push_back(make_certificate("h.slack_derivative", "derivative condition W' > V~' at the crossing",
                                            sl.derivative, ">", 0.0));
  r.certificates.push_back(make_certificate("h.crossing_above_R0", "crossing radius in (R0, R_hat/2)", sl.crossing_inner, ">", 0.0));
  r.certificates.push_back(make_certificate("h.crossing_below_half", "crossing radius in (R0, R_hat/2)", sl.crossing_outer, ">", 0.0));
  r.certificates.push_back(make_certificate("h.sign_changes", "single crossing of V~ and W", crossing_sign_changes(b.h), "==", 1.0));

  if (c.N == 1 && c.s < 0.5) {
    const MarginReport hm = verify_h_supersolution(b.h, k, certification_grid(b.h));
    r.certificates.push_back(make_certificate("h.discrete_margin", "global barrier supersolution a (-Delta)^s h >= 1",
                                              hm.min_margin, ">=", 0.95));
    const ExitTimeSolution w = getoor(1.0, 1, c.s);
    const auto grid = Grid1D<double>::with_spacing(1.0, 1.0 / 512.0);
    Eigen::VectorXd u(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) u[i] = w.value(grid.node(i));
    const Eigen::VectorXd Au = apply_discrete(build_discrete_op(grid, c.s), u, 0.0);
    double lo = 1e300;
    double hi = -1e300;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      if (std::abs(grid.node(i)) <= 0.8) {
        lo = std::min(lo, Au[i]);
        hi = std::max(hi, Au[i]);
      }
    }
    r.certificates.push_back(make_certificate("getoor.min", "exit-time identity (-Delta)^s W = 1 in the ball", lo, ">=", 0.97));
    r.certificates.push_back(make_certificate("getoor.max", "exit-time identity (-Delta)^s W = 1 in the ball", hi, "<=", 1.03));
  }

  if (settings.write_files) {
    const auto dir = settings.out_dir / "barriers";
    std::vector<double> radii = log_radii(1e-2, 1e3 * b.h.R_hat, 400);
    std::vector<double> V, h;
    for (double x : radii) {
      V.push_back(b.V.value(x));
      h.push_back(b.h.value(x));
    }
    write_csv(dir / "profiles.csv", {"r", "V", "h"}, {radii, V, h});
    std::vector<double> lr;
    for (double x : radii) lr.push_back(std::log10(x));
    write_line_plot(dir / "profiles.svg", "Barrier profiles", "log10 r", "value", {{"V", lr, V}, {"h", lr, h}}, true);
    write_csv(dir / "V_margins.csv", {"r", "margin"}, {vm.points, vm.margins});
  }
  return r;
}

Report run_elliptic(const ScenarioConfig& c, const RunSettings& settings) {
  Report r;
  r.scenario = "elliptic";
  const double tol = effective_tol(c, settings);
  const EllipticProblem p{make_coefficients(c), c.gamma, c.s, c.N};
  validate(p);
  validate(p.coeffs, c.N, c.s);
  const NestedResult nested = elliptic_nested_limit(p, schedule_of(c), c.window, tol);
  const Barriers b = build_barriers(c, p.coeffs);
  const DecayReport decay = verify_elliptic_decay(nested.solution, p, b.h);

  r.parameters.emplace_back("gamma", c.gamma);
  r.parameters.emplace_back("levels_used", static_cast<double>(nested.half_widths.size()));
  r.parameters.emplace_back("final_half_width", nested.solution.grid.half_width());
  r.parameters.emplace_back("M", decay.M);
  r.parameters.emplace_back("tail_residual", decay.tail_residual);
  const double last = nested.trace.empty() ? 0.0 : nested.trace.back();
  r.certificates.push_back(make_certificate("nested.final_difference", "nested-ball limit on the window", last, "<", tol,
                                            nested.converged ? "converged" : "schedule exhausted"));
  r.certificates.push_back(make_certificate("nested.trace_decreasing", "nested-ball limit on the window",
                                            decreasing(nested.trace) ? 1.0 : 0.0, "==", 1.0));
  r.certificates.push_back(make_certificate("decay.worst_slack", "barrier bound |u - gamma| <= M h", decay.worst_slack, ">=", 0.0));
  r.traces.push_back({"nested_trace", std::vector<double>(nested.half_widths.begin() + 1, nested.half_widths.end()), nested.trace});

  if (settings.write_files) {
    const auto dir = settings.out_dir / "elliptic";
    std::vector<double> x, u;
    for (Eigen::Index i = 0; i < nested.solution.grid.size(); ++i) {
      x.push_back(nested.solution.grid.node(i));
      u.push_back(nested.solution.values[i]);
    }
    write_csv(dir / "solution.csv", {"x", "u"}, {x, u});
    write_line_plot(dir / "solution.svg", "Elliptic solution", "x", "u", {{"u", x, u}});
    write_line_plot(dir / "nested_trace.svg", "Nested-ball differences", "half width", "sup difference",
                    {r.traces.back()}, true);
  }
  return r;
}

Report run_parabolic(const ScenarioConfig& c, const RunSettings& settings) {
  Report r;
  r.scenario = "parabolic";
  const double tol = effective_tol(c, settings);
  const ParabolicProblem p = make_parabolic_problem(c, false);
  validate(p.coeffs, c.N, c.s);
  const TimeGrid tg = TimeGrid::make(c.T, c.dt);
  const int stride = static_cast<int>(std::lround(1.0 / c.dt));
  const Barriers b = build_barriers(c, p.coeffs);
  const BarrierV0 V0 = build_V0(b.h);
  const bool bounded = p.coeffs.c_nonpositive;
  const ParabolicNestedResult nested =
      parabolic_nested_limit(p, schedule_of(c), tg, c.window, tol, stride, bounded ? &V0 : nullptr);
  const Trajectory& traj = nested.trajectory;
  const double R = std::max(b.V.R0, 2.0);
  const UniformBoundaryReport ub = verify_uniform_boundary(traj, p, b.V, R);

  r.parameters.emplace_back("levels_used", static_cast<double>(nested.half_widths.size()));
  r.parameters.emplace_back("final_half_width", traj.grid.half_width());
  r.parameters.emplace_back("C_bar_fit", ub.C_bar);
  r.parameters.emplace_back("max_KT_ratio", traj.max_KT_ratio);
  const double last = nested.trace.empty() ? 0.0 : nested.trace.back();
  r.certificates.push_back(make_certificate("nested.final_difference", "nested-ball limit on window x [dt, T]", last, "<",
                                            tol, nested.converged ? "converged" : "schedule exhausted"));
  r.certificates.push_back(make_certificate("a_priori.KT_ratio", "a priori bound |u_j| <= K_T", traj.max_KT_ratio, "<=", 1.0));
  if (traj.max_BV0_ratio) {
    r.certificates.push_back(make_certificate("global_bound.BV0_ratio", "global bound |u| <= B V0", *traj.max_BV0_ratio,
                                              "<=", 1.0 + 1e-9));
  }
  r.certificates.push_back(make_certificate("uniform_boundary.C_bar_finite", "sup_t |u - g| <= C_bar V + eps",
                                            std::isfinite(ub.C_bar) ? 1.0 : 0.0, "==", 1.0));
  r.certificates.push_back(make_certificate("uniform_boundary.outer_increase", "envelope nonincreasing in |x|",
                                            ub.worst_increase, "<=", 1e-12));
  r.traces.push_back({"nested_trace", std::vector<double>(nested.half_widths.begin() + 1, nested.half_widths.end()), nested.trace});
  r.traces.push_back({"sup_deviation", ub.radii, ub.sup_dev});

  if (settings.write_files) {
    const auto dir = settings.out_dir / "parabolic";
    std::vector<double> t, x, u;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      for (Eigen::Index i = 0; i < traj.grid.size(); ++i) {
        t.push_back(traj.times[k]);
        x.push_back(traj.grid.node(i));
        u.push_back(traj.states[k][i]);
      }
    }
    write_csv(dir / "trajectory.csv", {"t", "x", "u"}, {t, x, u});
    std::vector<Series> slices;
    for (std::size_t k : {std::size_t{0}, traj.times.size() / 4, traj.times.size() / 2, traj.times.size() - 1}) {
      Series s{"t=" + format_number(traj.times[k]), {}, {}};
      for (Eigen::Index i = 0; i < traj.grid.size(); ++i) {
        s.x.push_back(traj.grid.node(i));
        s.y.push_back(traj.states[k][i]);
      }
      slices.push_back(std::move(s));
    }
    write_line_plot(dir / "slices.svg", "Parabolic time slices", "x", "u", slices);
    write_line_plot(dir / "boundary_envelope.svg", "sup_t |u - g| against |x|", "|x|", "sup deviation",
                    {r.traces.back()}, true);
  }
  return r;
}

Report run_asymptotic(const ScenarioConfig& c, const RunSettings& settings) {
  Report r;
  r.scenario = "asymptotic";
  const double tol = effective_tol(c, settings);
  const ParabolicProblem p = make_parabolic_problem(c, true);
  validate(p.coeffs, c.N, c.s);
  const Barriers b = build_barriers(c, p.coeffs);
  const BarrierV0 V0 = build_V0(b.h);
  std::vector<double> checkpoints;
  for (double T = 10.0; T <= c.T + 1e-9; T += 10.0) checkpoints.push_back(T);
  if (checkpoints.empty() || checkpoints.back() < c.T - 1e-9) checkpoints.push_back(std::floor(c.T));
  const LongTimeReport lt = long_time_limit(p, schedule_of(c), c.T, c.dt, c.window, tol, checkpoints, &V0);

  const double A = std::max(p.g.sup + p.coeffs.f_sup, p.u0_sup);
  const TimeGrid tg = TimeGrid::make(c.T, c.dt);
  const SandwichReport sw =
      sandwich(p, constant_g(-p.g.sup), constant_g(p.g.sup), A, V0, schedule_of(c).grid(0), tg);
  double envelope_gap = 0.0;
  const auto& lo = sw.lower.trajectory.final_state();
  const auto& hi = sw.upper.trajectory.final_state();
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (std::abs(sw.middle.grid.node(i)) <= c.window) envelope_gap = std::max(envelope_gap, hi[i] - lo[i]);
  }

  r.parameters.emplace_back("gamma_limit", *p.g.limit);
  r.parameters.emplace_back("final_half_width", lt.elliptic.solution.grid.half_width());
  r.parameters.emplace_back("envelope_gap_at_T", envelope_gap);
  r.parameters.emplace_back("A", A);
  r.certificates.push_back(make_certificate("long_time.discrepancy_at_T", "u(., t) -> W as t -> infinity",
                                            lt.discrepancy.back(), "<=", 1e-2));
  r.certificates.push_back(make_certificate("long_time.discrepancy_decreasing", "u(., t) -> W as t -> infinity",
                                            decreasing(lt.discrepancy) ? 1.0 : 0.0, "==", 1.0));
  if (lt.trajectory.max_BV0_ratio) {
    r.certificates.push_back(make_certificate("global_bound.BV0_ratio", "global bound |u| <= B V0",
                                              *lt.trajectory.max_BV0_ratio, "<=", 1.0 + 1e-9));
  }
  r.certificates.push_back(make_certificate("envelope.sub_step_change", "sub-envelope nondecreasing in t",
                                            sw.lower.worst_violation, ">=", -1e-10));
  r.certificates.push_back(make_certificate("envelope.super_step_change", "super-envelope nonincreasing in t",
                                            sw.upper.worst_violation, ">=", -1e-10));
  r.certificates.push_back(make_certificate("envelope.sandwich_gap", "w_lower <= u <= w_upper", sw.worst_gap, ">=", 0.0));
  r.traces.push_back({"discrepancy", lt.checkpoints, lt.discrepancy});
  r.traces.push_back({"cauchy", lt.checkpoints, lt.cauchy});

  if (settings.write_files) {
    const auto dir = settings.out_dir / "asymptotic";
    write_csv(dir / "discrepancy.csv", {"T", "discrepancy", "cauchy"}, {lt.checkpoints, lt.discrepancy, lt.cauchy});
    write_line_plot(dir / "discrepancy.svg", "sup |u(T) - W| on the window", "T", "discrepancy",
                    {r.traces[0], r.traces[1]}, true);
    std::vector<double> x, W, u;
    const auto& sol = lt.elliptic.solution;
    for (Eigen::Index i = 0; i < sol.grid.size(); ++i) {
      x.push_back(sol.grid.node(i));
      W.push_back(sol.values[i]);
      u.push_back(lt.trajectory.final_state()[i]);
    }
    write_csv(dir / "limit.csv", {"x", "W", "u_T"}, {x, W, u});
    write_line_plot(dir / "limit.svg", "Elliptic limit and final parabolic state", "x", "value",
                    {{"W", x, W}, {"u(T)", x, u}});
  }
  return r;
}

ScenarioResult run_scenario(ScenarioConfig c, const RunSettings& settings) {
  validate(c);
  ScenarioResult res;
  if (c.kind == "barriers") res.report = run_barriers(c, settings);
  else if (c.kind == "elliptic") res.report = run_elliptic(c, settings);
  else if (c.kind == "parabolic") res.report = run_parabolic(c, settings);
  else if (c.kind == "asymptotic") res.report = run_asymptotic(c, settings);
  else {
    using Pipeline = Report (*)(const ScenarioConfig&, const RunSettings&);
    const std::vector<std::pair<std::string, Pipeline>> pipelines = {
        {"barriers", run_barriers}, {"elliptic", run_elliptic}, {"parabolic", run_parabolic}, {"asymptotic", run_asymptotic}};
    res.report.scenario = "verify-all";
    std::vector<Report> parts;
    if (settings.parallel) {
      std::vector<std::future<Report>> futures;
      for (const auto& [name, fn] : pipelines) futures.push_back(std::async(std::launch::async, fn, std::cref(c), std::cref(settings)));
      for (auto& f : futures) parts.push_back(f.get());
    } else {
      for (const auto& [name, fn] : pipelines) parts.push_back(fn(c, settings));
    }
    for (std::size_t i = 0; i < parts.size(); ++i) res.report.merge(parts[i], pipelines[i].first);
  }
  if (settings.write_files) {
    emit_report(res.report, settings.out_dir);
    write_text_file(settings.out_dir / "config.normalized", to_string(c));
  }
  res.exit_code = res.report.all_pass() ? 0 : 1;
  return res;
}

}  // namespace fracinf
