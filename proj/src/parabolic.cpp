#include "fracinf/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
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

BoundaryTrajectory constant_g(double gamma) {
  return {[gamma](double) { return gamma; }, std::abs(gamma), gamma, Monotonicity::constant,
          "constant(" + fmt(gamma) + ")"};
}

BoundaryTrajectory sin_decay_g(double gamma) {
  // max_t e^{-t} |sin t| is attained at t = pi/4.
  const double bump = std::exp(-0.25 * 3.14159265358979323846) * std::sqrt(0.5);
  return {[gamma](double t) { return gamma + std::exp(-t) * std::sin(t); }, std::abs(gamma) + bump, gamma,
          Monotonicity::none, "sin_decay(" + fmt(gamma) + ")"};
}

BoundaryTrajectory exp_decay_g(double gamma) {
  return {[gamma](double t) { return gamma + std::exp(-t); }, std::max(std::abs(gamma), std::abs(gamma + 1.0)),
          gamma, Monotonicity::nonincreasing, "exp_decay(" + fmt(gamma) + ")"};
}

BoundaryTrajectory sine_g(double amplitude) {
  return {[amplitude](double t) { return amplitude * std::sin(t); }, std::abs(amplitude), std::nullopt,
          Monotonicity::none, "sine(" + fmt(amplitude) + ")"};
}

void validate(const ParabolicProblem& p, double L_check, double tol_compat) {
  if (p.N != 1) throw HypothesisError("parabolic problem: grid solvers need N = 1");
  if (!(p.s > 0.0 && p.s < 0.5)) throw HypothesisError("parabolic problem: s must lie in (0, 1/2)");
  if (!(p.coeffs.alpha > 2.0 * p.s)) throw HypothesisError("parabolic problem: needs alpha > 2s");
  if (!p.u0 || !p.g.g) throw HypothesisError("parabolic problem: u0 and g must be set");
  if (p.infinite_horizon && !p.coeffs.c_nonpositive) {
    throw HypothesisError("parabolic problem: infinite horizons need c <= 0");
  }
  const double g0 = p.g(0.0);
  for (int i = 0; i <= 64; ++i) {
    const double r = L_check * std::pow(10.0, i / 64.0);
    for (double x : {-r, r}) {
      if (std::abs(p.u0(x) - g0) > tol_compat) {
        throw HypothesisError("parabolic problem: u0 does not approach g(0) (compatibility fails at x = " + fmt(x) +
                              ")");
      }
    }
  }
}

TimeGrid TimeGrid::make(double T, double dt) {
  if (!(T > 0.0 && dt > 0.0)) throw DomainError("TimeGrid: T and dt must be positive");
  const double n = std::round(T / dt);
  if (n < 1.0 || std::abs(n * dt - T) > 1e-9 * T) throw DomainError("TimeGrid: T must be a multiple of dt");
  return {T, dt, static_cast<int>(n)};
}

double cutoff(double j, double x) {
  const double rho = std::clamp(2.0 * std::abs(x) / j - 1.0, 0.0, 1.0);
  if (rho >= 1.0) return 0.0;
  if (rho <= 0.0) return 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - rho * rho));
}

Eigen::VectorXd cutoff_initial(const std::function<double(double)>& u0, double g0, double j,
                               const Grid1D<double>& grid) {
  if (grid.half_width() < j * (1.0 - 1e-12)) throw DomainError("cutoff_initial: grid is smaller than the ball B_j");
  Eigen::VectorXd v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    const double z = cutoff(j, x);
    v[i] = z * u0(x) + (1.0 - z) * g0;
  }
  return v;
}

ParabolicStepper::ParabolicStepper(const DiscreteFracOp& op, const CoefficientField& coeffs, double dt)
    : grid_(op.grid()), dt_(dt) {
  if (!(dt > 0.0)) throw DomainError("parabolic step: dt must be positive");
  const Eigen::Index n = op.size();
  double c_plus = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) c_plus = std::max(c_plus, coeffs.c(grid_.node(i)));
  if (!coeffs.c_nonpositive) c_plus = std::max(c_plus, coeffs.c_sup);
  if (c_plus > 0.0 && dt * c_plus >= 1.0) {
    throw StabilityError("parabolic step: dt = " + fmt(dt) + " is not below 1/sup c+ = " + fmt(1.0 / c_plus));
  }
  Eigen::MatrixXd M = elliptic_matrix(op, coeffs);
  M *= dt;
  M.diagonal().array() += 1.0;
  lu_.compute(M);
  forcing_.resize(n);
  coupling_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid_.node(i);
    forcing_[i] = dt * coeffs.f(x);
    coupling_[i] = dt * coeffs.a(x) * op.normalization() * op.exterior_coupling()[i];
  }
}

Eigen::VectorXd ParabolicStepper::step(const Eigen::VectorXd& state, double g_next) const {
  if (state.size() != grid_.size()) throw DomainError("parabolic step: state length does not match the grid");
  Eigen::VectorXd next = lu_.solve(state + forcing_ + coupling_ * g_next);
  if (!next.allFinite()) throw NumericalError("parabolic step: non-finite values");
  return next;
}

Eigen::VectorXd parabolic_step(const DiscreteFracOp& op, const Eigen::VectorXd& state, double dt,
                               const CoefficientField& coeffs, double g_next) {
  return ParabolicStepper(op, coeffs, dt).step(state, g_next);
}

Trajectory solve_parabolic_ball(const ParabolicProblem& p, const TimeGrid& tg, const Grid1D<double>& grid,
                                const RunOptions& options) {
  if (!(p.s > 0.0 && p.s < 0.5)) throw HypothesisError("parabolic problem: s must lie in (0, 1/2)");
  if (options.record_stride < 1) throw DomainError("solve_parabolic_ball: record stride must be positive");
  const DiscreteFracOp op = build_discrete_op(grid, p.s);
  const ParabolicStepper stepper(op, p.coeffs, tg.dt);

  Eigen::VectorXd u = options.initial ? *options.initial : cutoff_initial(p.u0, p.g(0.0), grid.half_width(), grid);
  if (u.size() != grid.size()) throw DomainError("solve_parabolic_ball: initial datum does not match the grid");
  const double u0_sup = std::max(p.u0_sup, u.cwiseAbs().maxCoeff());
  const double bound_C = std::max({p.coeffs.f_sup, p.g.sup, u0_sup});
  const double K_T = bound_C * std::exp((1.0 + p.coeffs.c_sup) * tg.T);
  const bool check_V0 = options.V0 != nullptr && p.coeffs.c_nonpositive;
  Eigen::VectorXd V0;
  if (check_V0) {
    V0.resize(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) V0[i] = options.V0->value(grid.node(i));
  }

  Trajectory traj{grid, {0.0}, {u}, {p.g(0.0)}, 0.0, std::nullopt};
  auto check = [&](const Eigen::VectorXd& v, double t) {
    const double m = v.cwiseAbs().maxCoeff();
    const double kt = K_T > 0.0 ? m / K_T : (m > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    traj.max_KT_ratio = std::max(traj.max_KT_ratio, kt);
    if (kt > 1.0 + 1e-12) throw InvariantFailure("solve_parabolic_ball: |u| exceeds K_T at t = " + fmt(t));
    if (check_V0) {
      const double ratio = bound_C > 0.0 ? (v.cwiseAbs().array() / (bound_C * V0.array())).maxCoeff()
                                         : (m > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      traj.max_BV0_ratio = std::max(traj.max_BV0_ratio.value_or(0.0), ratio);
      if (ratio > 1.0 + 1e-9) throw InvariantFailure("solve_parabolic_ball: |u| exceeds B V0 at t = " + fmt(t));
    }
  };
  check(u, 0.0);
  for (int n = 1; n <= tg.steps; ++n) {
    const double t = tg.time(n);
    Eigen::VectorXd next = stepper.step(u, p.g(t));
    check(next, t);
    if (options.observer) options.observer(n, u, next);
    u = std::move(next);
    if (n % options.record_stride == 0 || n == tg.steps) {
      traj.times.push_back(t);
      traj.states.push_back(u);
      traj.exterior.push_back(p.g(t));
    }
  }
  return traj;
}

double window_difference(const Trajectory& u, const Trajectory& v, double window) {
  if (u.times.size() != v.times.size()) throw DomainError("window_difference: recorded times differ");
  const double dx = u.grid.spacing();
  if (std::abs(dx - v.grid.spacing()) > 1e-12 * dx) throw DomainError("window_difference: grids must share the spacing");
  double worst = 0.0;
  for (std::size_t k = 1; k < u.times.size(); ++k) {
    for (Eigen::Index i = 0; i < u.grid.size(); ++i) {
      const double x = u.grid.node(i);
      if (std::abs(x) > window) continue;
      worst = std::max(worst, std::abs(u.states[k][i] - v.states[k][v.grid.nearest(x)]));
    }
  }
  return worst;
}

ParabolicNestedResult parabolic_nested_limit(const ParabolicProblem& p, const NestedSchedule& schedule,
                                             const TimeGrid& tg, double window, double tol, int record_stride,
                                             const BarrierV0* V0) {
  validate(schedule);
  if (!(window > 0.0 && window < schedule.L0)) throw DomainError("parabolic_nested_limit: need 0 < window < L0");
  RunOptions opts;
  opts.record_stride = record_stride;
  opts.V0 = V0;
  ParabolicNestedResult res{solve_parabolic_ball(p, tg, schedule.grid(0), opts), {schedule.L0}, {}, false};
  for (int j = 1; j < schedule.levels; ++j) {
    Trajectory next = solve_parabolic_ball(p, tg, schedule.grid(j), opts);
    const double d = window_difference(res.trajectory, next, window);
    res.trace.push_back(d);
    res.half_widths.push_back(next.grid.half_width());
    res.trajectory = std::move(next);
    if (d < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

UniformBoundaryReport verify_uniform_boundary(const Trajectory& traj, const ParabolicProblem& p,
                                              const DecayBarrierV& V, double R) {
  (void)p;
  UniformBoundaryReport rep;
  rep.R = R;
  const double L = traj.grid.half_width();
  if (R < V.R0) throw DomainError("verify_uniform_boundary: R must be at least R0");
  if (!(0.9 * L > R)) throw DomainError("verify_uniform_boundary: grid must extend beyond R");
  const Eigen::Index n = traj.grid.size();
  for (Eigen::Index i = n / 2; i < n; ++i) {
    const double r = traj.grid.node(i);
    if (r < R || r > 0.9 * L) continue;
    const Eigen::Index mirror = n - 1 - i;
    double sup = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double g = traj.exterior[k];
      sup = std::max({sup, std::abs(traj.states[k][i] - g), std::abs(traj.states[k][mirror] - g)});
    }
    rep.radii.push_back(r);
    rep.sup_dev.push_back(sup);
    rep.C_bar = std::max(rep.C_bar, std::max(0.0, sup - rep.epsilon) / V.value(r));
  }
  const double decade = 0.09 * L;
  for (std::size_t k = 1; k < rep.radii.size(); ++k) {
    if (rep.radii[k - 1] < decade) continue;
    rep.worst_increase = std::max(rep.worst_increase, rep.sup_dev[k] - rep.sup_dev[k - 1]);
  }
  rep.envelope_at_R = rep.C_bar * V.value(R) + rep.epsilon;
  rep.envelope_at_2R = rep.C_bar * V.value(2.0 * R) + rep.epsilon;
  rep.pass = !rep.radii.empty() && std::isfinite(rep.C_bar) && rep.worst_increase <= 1e-12 &&
             rep.envelope_at_2R <= rep.envelope_at_R;
  return rep;
}

EnvelopeReport monotone_envelope_run(EnvelopeDirection direction, const BoundaryTrajectory& g_mono,
                                     const ParabolicProblem& p, double A, const BarrierV0& V0,
                                     const Grid1D<double>& grid, const TimeGrid& tg, bool strict,
                                     int record_stride) {
  const bool sub = direction == EnvelopeDirection::sub;
  if (!p.coeffs.c_nonpositive) throw HypothesisError("monotone_envelope_run: needs c <= 0");
  const Monotonicity wanted = sub ? Monotonicity::nondecreasing : Monotonicity::nonincreasing;
  if (g_mono.monotone != wanted && g_mono.monotone != Monotonicity::constant) {
    throw HypothesisError(sub ? "monotone_envelope_run: sub-run needs nondecreasing g"
                              : "monotone_envelope_run: super-run needs nonincreasing g");
  }
  if (A < g_mono.sup + p.coeffs.f_sup) throw HypothesisError("monotone_envelope_run: need A >= |g|_inf + |f|_inf");

  const double sign = sub ? -1.0 : 1.0;
  Eigen::VectorXd init(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) init[i] = sign * A * V0.value(grid.node(i));

  EnvelopeReport rep{Trajectory{grid, {}, {}, {}, 0.0, std::nullopt}, 0.0, 0.0, false};
  {
    const DiscreteFracOp op = build_discrete_op(grid, p.s);
    const Eigen::VectorXd Au = apply_discrete(op, init, g_mono(0.0));
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double x = grid.node(i);
      const double res = -p.coeffs.a(x) * Au[i] + p.coeffs.c(x) * init[i] + p.coeffs.f(x);
      worst = std::min(worst, -sign * res);
    }
    rep.first_step_residual = worst;
  }

  ParabolicProblem q = p;
  q.g = g_mono;
  RunOptions opts;
  opts.record_stride = record_stride;
  opts.initial = init;
  double worst = 0.0;
  opts.observer = [&](int, const Eigen::VectorXd& before, const Eigen::VectorXd& after) {
    const double change = sub ? (after - before).minCoeff() : -(after - before).maxCoeff();
    worst = std::min(worst, change);
  };
  rep.trajectory = solve_parabolic_ball(q, tg, grid, opts);
  rep.worst_violation = worst;
  rep.monotone = worst >= -1e-10;
  if (strict && !rep.monotone) {
    throw InvariantFailure(std::string("monotone_envelope_run: ") + (sub ? "sub" : "super") +
                           "-run is not monotone in time (worst step change " + fmt(worst) + ")");
  }
  return rep;
}

SandwichReport sandwich(const ParabolicProblem& p, const BoundaryTrajectory& g1, const BoundaryTrajectory& g2,
                        double A, const BarrierV0& V0, const Grid1D<double>& grid, const TimeGrid& tg) {
  if (A < p.u0_sup) throw HypothesisError("sandwich: need A >= |u0|_inf");
  auto lower = std::async(std::launch::async, [&] {
    return monotone_envelope_run(EnvelopeDirection::sub, g1, p, A, V0, grid, tg);
  });
  auto upper = std::async(std::launch::async, [&] {
    return monotone_envelope_run(EnvelopeDirection::super, g2, p, A, V0, grid, tg);
  });
  SandwichReport rep{lower.get(), upper.get(), solve_parabolic_ball(p, tg, grid), 0.0, false};
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rep.middle.states.size(); ++k) {
    const Eigen::VectorXd& u = rep.middle.states[k];
    gap = std::min(gap, (u - rep.lower.trajectory.states[k]).minCoeff());
    gap = std::min(gap, (rep.upper.trajectory.states[k] - u).minCoeff());
  }
  rep.worst_gap = gap;
  rep.pass = gap >= 0.0;
  return rep;
}

LongTimeReport long_time_limit(const ParabolicProblem& p, const NestedSchedule& schedule, double T_max, double dt,
                               double window, double tol, const std::vector<double>& checkpoints,
                               const BarrierV0* V0) {
  if (!p.coeffs.c_nonpositive) throw HypothesisError("long_time_limit: needs c <= 0");
  if (!p.g.limit) throw HypothesisError("long_time_limit: g must declare its limit");
  const TimeGrid tg = TimeGrid::make(T_max, dt);
  const double stride_f = std::round(1.0 / dt);
  if (std::abs(stride_f * dt - 1.0) > 1e-9) throw DomainError("long_time_limit: 1/dt must be an integer");

  LongTimeReport rep;
  EllipticProblem ep{p.coeffs, *p.g.limit, p.s, p.N};
  rep.elliptic = elliptic_nested_limit(ep, schedule, window, tol);
  const SolutionField& W = rep.elliptic.solution;

  RunOptions opts;
  opts.record_stride = static_cast<int>(stride_f);
  opts.V0 = V0;
  rep.trajectory = solve_parabolic_ball(p, tg, W.grid, opts);

  auto sup_window = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < W.grid.size(); ++i) {
      if (std::abs(W.grid.node(i)) <= window) worst = std::max(worst, std::abs(u[i] - v[i]));
    }
    return worst;
  };
  for (double T : checkpoints) {
    const auto k = static_cast<std::size_t>(std::llround(T));
    if (k < 1 || k >= rep.trajectory.states.size() || std::abs(rep.trajectory.times[k] - T) > 1e-9 * T) {
      throw DomainError("long_time_limit: checkpoint " + fmt(T) + " is not a recorded unit time");
    }
    rep.checkpoints.push_back(T);
    rep.discrepancy.push_back(sup_window(rep.trajectory.states[k], W.values));
    rep.cauchy.push_back(sup_window(rep.trajectory.states[k], rep.trajectory.states[k - 1]));
  }
  rep.settled = !rep.cauchy.empty() && rep.cauchy.back() < tol;
  return rep;
}

}  // namespace fracinf
