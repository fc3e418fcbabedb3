#include "fracinf/elliptic.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

#include "fracinf/errors.hpp"
#include "fracinf/frac_operator.hpp"

namespace fracinf {

void validate(const EllipticProblem& p) {
  if (p.N != 1) throw HypothesisError("elliptic problem: grid solvers need N = 1");
  if (!(p.s > 0.0 && p.s < 0.5)) throw HypothesisError("elliptic problem: s must lie in (0, 1/2)");
  if (!p.coeffs.c_nonpositive) throw HypothesisError("elliptic problem: needs c <= 0");
  if (!(p.coeffs.alpha > 2.0 * p.s)) throw HypothesisError("elliptic problem: needs alpha > 2s");
  if (!std::isfinite(p.gamma)) throw HypothesisError("elliptic problem: gamma must be finite");
}

std::vector<double> NestedSchedule::half_widths() const {
  std::vector<double> L;
  for (int j = 0; j < levels; ++j) L.push_back(L0 * std::exp2(j));
  return L;
}

Grid1D<double> NestedSchedule::grid(int level) const { return Grid1D<double>::with_spacing(L0 * std::exp2(level), dx); }

void validate(const NestedSchedule& schedule) {
  if (schedule.levels < 3) throw DomainError("nested schedule: need at least 3 levels");
  if (!(schedule.L0 > 0.0 && schedule.dx > 0.0)) throw DomainError("nested schedule: L0 and dx must be positive");
  (void)schedule.grid(0);
}

double SolutionField::at(double x) const {
  if (std::abs(x) >= grid.half_width()) return exterior;
  return values[grid.nearest(x)];
}

Eigen::MatrixXd elliptic_matrix(const DiscreteFracOp& op, const CoefficientField& coeffs) {
  Eigen::MatrixXd M = op.matrix();
  for (Eigen::Index i = 0; i < op.size(); ++i) {
    const double x = op.grid().node(i);
    M.row(i) *= coeffs.a(x);
    M(i, i) -= coeffs.c(x);
  }
  return M;
}

SolutionField solve_elliptic_ball(const EllipticProblem& p, const Grid1D<double>& grid) {
  validate(p);
  const DiscreteFracOp op = build_discrete_op(grid, p.s);
  const Eigen::MatrixXd M = elliptic_matrix(op, p.coeffs);
  Eigen::VectorXd rhs(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    rhs[i] = p.coeffs.f(x) + p.coeffs.a(x) * op.normalization() * op.exterior_coupling()[i] * p.gamma;
  }
  SolutionField out{grid, Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(rhs), p.gamma};
  if (!out.values.allFinite()) throw NumericalError("solve_elliptic_ball: linear solve produced non-finite values");
  return out;
}

SolutionField solve_elliptic_ball(const EllipticProblem& p, double L, Eigen::Index n) {
  return solve_elliptic_ball(p, Grid1D<double>(L, n));
}

double window_difference(const SolutionField& u, const SolutionField& v, double window) {
  const double dx = u.grid.spacing();
  if (std::abs(dx - v.grid.spacing()) > 1e-12 * dx) throw DomainError("window_difference: grids must share the spacing");
  const SolutionField& small = u.grid.half_width() <= v.grid.half_width() ? u : v;
  const SolutionField& large = &small == &u ? v : u;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < small.grid.size(); ++i) {
    const double x = small.grid.node(i);
    if (std::abs(x) > window) continue;
    worst = std::max(worst, std::abs(small.values[i] - large.values[large.grid.nearest(x)]));
  }
  return worst;
}

NestedResult elliptic_nested_limit(const EllipticProblem& p, const NestedSchedule& schedule, double window,
                                   double tol) {
  validate(schedule);
  if (!(window > 0.0 && window < schedule.L0)) throw DomainError("elliptic_nested_limit: need 0 < window < L0");
  NestedResult res{solve_elliptic_ball(p, schedule.grid(0)), {schedule.L0}, {}, false};
  for (int j = 1; j < schedule.levels; ++j) {
    SolutionField next = solve_elliptic_ball(p, schedule.grid(j));
    const double d = window_difference(res.solution, next, window);
    res.trace.push_back(d);
    res.half_widths.push_back(next.grid.half_width());
    res.solution = std::move(next);
    if (d < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

DecayReport verify_elliptic_decay(const SolutionField& u, const EllipticProblem& p, const GlobalBarrierH& h) {
  DecayReport rep;
  rep.M = p.coeffs.c_sup * std::abs(p.gamma) + p.coeffs.f_sup;
  rep.worst_slack = std::numeric_limits<double>::infinity();
  const double L = u.grid.half_width();
  for (Eigen::Index i = 0; i < u.grid.size(); ++i) {
    const double x = u.grid.node(i);
    const double dev = std::abs(u.values[i] - p.gamma);
    const double slack = rep.M * h.value(x) + 1e-6 - dev;
    if (slack < rep.worst_slack) {
      rep.worst_slack = slack;
      rep.worst_at = x;
    }
    if (std::abs(x) >= 0.9 * L) rep.tail_residual = std::max(rep.tail_residual, dev);
  }
  rep.pass = rep.worst_slack >= 0.0;
  return rep;
}

}  // namespace fracinf
