#pragma once

#include <Eigen/Core>
#include <vector>

#include "fracinf/barriers.hpp"
#include "fracinf/coefficients.hpp"
#include "fracinf/grid.hpp"

namespace fracinf {

/// a (-Delta)^s u - c u = f in R, u -> gamma at infinity; c <= 0.
struct EllipticProblem {
  CoefficientField coeffs;
  double gamma = 0.0;
  double s = 0.25;
  int N = 1;
};

/// Throws HypothesisError unless N = 1, 0 < s < 1/2, alpha > 2s and c <= 0.
void validate(const EllipticProblem& p);

/// Half widths L_j = L0 2^j, j < levels, all sharing the spacing dx.
struct NestedSchedule {
  double L0 = 8.0;
  double dx = 0.125;
  int levels = 5;

  std::vector<double> half_widths() const;
  Grid1D<double> grid(int level) const;
};

void validate(const NestedSchedule& schedule);

struct SolutionField {
  Grid1D<double> grid;
  Eigen::VectorXd values;
  double exterior = 0.0;

  /// Value at x; nodes are used directly, the exterior value outside (-L, L).
  double at(double x) const;
};

/// Solves (diag(a) A - diag(c)) u = f + diag(a) C e gamma on the grid.
SolutionField solve_elliptic_ball(const EllipticProblem& p, const Grid1D<double>& grid);
SolutionField solve_elliptic_ball(const EllipticProblem& p, double L, Eigen::Index n);

struct NestedResult {
  SolutionField solution;
  std::vector<double> half_widths;  // levels actually solved
  std::vector<double> trace;        // sup-window difference between consecutive levels
  bool converged = false;
};

/// Largest |u - v| over shared nodes with |x| <= window (grids with equal spacing).
double window_difference(const SolutionField& u, const SolutionField& v, double window);

NestedResult elliptic_nested_limit(const EllipticProblem& p, const NestedSchedule& schedule, double window,
                                   double tol);

struct DecayReport {
  double M = 0.0;
  double worst_slack = 0.0;  // min over nodes of M h + 1e-6 - |u - gamma|
  double worst_at = 0.0;
  double tail_residual = 0.0;  // max |u - gamma| on the outer 10% of the grid
  bool pass = false;
};

/// Checks |u - gamma| <= M h + 1e-6 nodewise, M = |c|_inf |gamma| + |f|_inf.
DecayReport verify_elliptic_decay(const SolutionField& u, const EllipticProblem& p, const GlobalBarrierH& h);

/// diag(a) A - diag(c) assembled for the grid.
Eigen::MatrixXd elliptic_matrix(const DiscreteFracOp& op, const CoefficientField& coeffs);

}  // namespace fracinf
