#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracinf/barriers.hpp"
#include "fracinf/coefficients.hpp"
#include "fracinf/elliptic.hpp"
#include "fracinf/frac_operator.hpp"
#include "fracinf/grid.hpp"

namespace fracinf {

enum class Monotonicity { none, constant, nondecreasing, nonincreasing };

/// Exterior datum g(t), constant in space.
struct BoundaryTrajectory {
  std::function<double(double)> g;
  double sup = 0.0;
  std::optional<double> limit;
  Monotonicity monotone = Monotonicity::none;
  std::string label;

  double operator()(double t) const { return g(t); }
};

BoundaryTrajectory constant_g(double gamma);
/// gamma + e^{-t} sin t
BoundaryTrajectory sin_decay_g(double gamma);
/// gamma + e^{-t}
BoundaryTrajectory exp_decay_g(double gamma);
/// amplitude sin t
BoundaryTrajectory sine_g(double amplitude);

/// u_t = -a (-Delta)^s u + c u + f in R x (0, T], u -> g(t) at infinity.
struct ParabolicProblem {
  CoefficientField coeffs;
  std::function<double(double)> u0;
  double u0_sup = 0.0;
  BoundaryTrajectory g;
  double s = 0.25;
  int N = 1;
  bool infinite_horizon = false;
};

/// Checks N = 1, s in (0, 1/2), alpha > 2s, c <= 0 for infinite horizons, and
/// |u0(x) - g(0)| <= tol_compat for |x| in [L_check, 10 L_check].
void validate(const ParabolicProblem& p, double L_check = 50.0, double tol_compat = 1e-3);

struct TimeGrid {
  double T = 1.0;
  double dt = 0.1;
  int steps = 10;

  static TimeGrid make(double T, double dt);
  double time(int n) const { return dt * n; }
};

/// exp(1 - 1/(1 - rho^2)), rho = clamp(2|x|/j - 1, 0, 1).
double cutoff(double j, double x);

/// zeta_j u0 + (1 - zeta_j) g0 at the nodes. Needs half width >= j.
Eigen::VectorXd cutoff_initial(const std::function<double(double)>& u0, double g0, double j,
                               const Grid1D<double>& grid);

/// Implicit Euler for a fixed operator and step:
///   (I + dt diag(a) A - dt diag(c)) u_{n+1} = u_n + dt f + dt diag(a) C e g_{n+1}.
class ParabolicStepper {
 public:
  ParabolicStepper(const DiscreteFracOp& op, const CoefficientField& coeffs, double dt);

  Eigen::VectorXd step(const Eigen::VectorXd& state, double g_next) const;
  double dt() const { return dt_; }
  const Grid1D<double>& grid() const { return grid_; }

 private:
  Grid1D<double> grid_;
  double dt_;
  Eigen::VectorXd forcing_;   // dt f
  Eigen::VectorXd coupling_;  // dt a C e
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

Eigen::VectorXd parabolic_step(const DiscreteFracOp& op, const Eigen::VectorXd& state, double dt,
                               const CoefficientField& coeffs, double g_next);

struct Trajectory {
  Grid1D<double> grid;
  std::vector<double> times;              // recorded times, starting at 0
  std::vector<Eigen::VectorXd> states;    // node values at those times
  std::vector<double> exterior;           // g at those times
  double max_KT_ratio = 0.0;              // max |u| / K_T
  std::optional<double> max_BV0_ratio;    // max |u| / (B V0) when checked

  const Eigen::VectorXd& final_state() const { return states.back(); }
};

struct RunOptions {
  int record_stride = 1;                // keep every k-th step (the last step is always kept)
  const BarrierV0* V0 = nullptr;        // enables the |u| <= B V0 check (c <= 0 only)
  std::optional<Eigen::VectorXd> initial;  // overrides the cutoff initial datum
  std::function<void(int, const Eigen::VectorXd&, const Eigen::VectorXd&)> observer;  // (step, before, after)
};

/// Runs the ball problem on `grid` (half width j). Throws InvariantFailure
/// if |u| exceeds K_T = max{|f|, |g|, |u0|} e^{(1 + |c|) T} or, when V0 is
/// given, B V0 with B = max{|f|, |u0|, |g|}.
Trajectory solve_parabolic_ball(const ParabolicProblem& p, const TimeGrid& tg, const Grid1D<double>& grid,
                                const RunOptions& options = {});

struct ParabolicNestedResult {
  Trajectory trajectory;
  std::vector<double> half_widths;
  std::vector<double> trace;
  bool converged = false;
};

/// Sup over |x| <= window and recorded times t >= dt of |u - v|.
double window_difference(const Trajectory& u, const Trajectory& v, double window);

ParabolicNestedResult parabolic_nested_limit(const ParabolicProblem& p, const NestedSchedule& schedule,
                                             const TimeGrid& tg, double window, double tol, int record_stride = 1,
                                             const BarrierV0* V0 = nullptr);

struct UniformBoundaryReport {
  std::vector<double> radii;   // |x| of the checked nodes, increasing
  std::vector<double> sup_dev;  // sup_t |u(x, t) - g(t)|, max over +-x
  double C_bar = 0.0;
  double epsilon = 1e-3;
  double R = 0.0;
  double envelope_at_R = 0.0;
  double envelope_at_2R = 0.0;
  double worst_increase = 0.0;  // largest increase of sup_dev on the outer decade
  bool pass = false;
};

UniformBoundaryReport verify_uniform_boundary(const Trajectory& traj, const ParabolicProblem& p,
                                              const DecayBarrierV& V, double R);

enum class EnvelopeDirection { sub, super };

struct EnvelopeReport {
  Trajectory trajectory;
  double worst_violation = 0.0;  // most negative (sub) or positive (super) step change
  double first_step_residual = 0.0;  // discrete sub/super residual of the initial datum
  bool monotone = false;
};

/// Starts from -A V0 (sub) or +A V0 (super) and checks monotonicity in time
/// to 1e-10 at every node and step; throws InvariantFailure on violation
/// when `strict` is set.
EnvelopeReport monotone_envelope_run(EnvelopeDirection direction, const BoundaryTrajectory& g_mono,
                                     const ParabolicProblem& p, double A, const BarrierV0& V0,
                                     const Grid1D<double>& grid, const TimeGrid& tg, bool strict = false,
                                     int record_stride = 1);

struct SandwichReport {
  EnvelopeReport lower;
  EnvelopeReport upper;
  Trajectory middle;
  double worst_gap = 0.0;  // min over steps and nodes of min(u - w_lower, w_upper - u)
  bool pass = false;
};

/// Runs the sub-envelope with g1, the problem with its own g, and the
/// super-envelope with g2 (concurrently) and checks w_lower <= u <= w_upper.
SandwichReport sandwich(const ParabolicProblem& p, const BoundaryTrajectory& g1, const BoundaryTrajectory& g2,
                        double A, const BarrierV0& V0, const Grid1D<double>& grid, const TimeGrid& tg);

struct LongTimeReport {
  std::vector<double> checkpoints;
  std::vector<double> discrepancy;  // sup-window |u(T_k) - W|
  std::vector<double> cauchy;       // sup-window |u(t) - u(t - 1)| at the checkpoints
  NestedResult elliptic;
  Trajectory trajectory;
  bool settled = false;  // Cauchy difference fell below tol
};

/// Runs the problem on the last grid of `schedule` up to T_max and compares
/// with the nested elliptic limit for gamma = lim g.
LongTimeReport long_time_limit(const ParabolicProblem& p, const NestedSchedule& schedule, double T_max, double dt,
                               double window, double tol, const std::vector<double>& checkpoints,
                               const BarrierV0* V0 = nullptr);

}  // namespace fracinf
