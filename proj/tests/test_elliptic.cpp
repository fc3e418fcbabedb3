#include <Eigen/LU>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fracinf/elliptic.hpp"
#include "fracinf/errors.hpp"
#include "support.hpp"

using namespace fracinf;

namespace {

EllipticProblem bump_problem(double gamma = 0.0) {
  EllipticProblem p{power_law_coefficients(1.0, 1.5), gamma, 0.25, 1};
  set_bump_f(p.coeffs, 1.0, 1.0);
  return p;
}

}  // namespace

TEST_CASE("constant solutions are reproduced to round-off") {
  const auto grid = Grid1D<double>::with_spacing(8.0, 0.125);
  EllipticProblem p{power_law_coefficients(1.0, 1.5), 2.0, 0.25, 1};
  CHECK((solve_elliptic_ball(p, grid).values.array() - 2.0).abs().maxCoeff() <= 1e-10);

  set_gaussian_well_c(p.coeffs, 3.0, 0.7);
  p.gamma = -0.8;
  const auto c = p.coeffs.c;
  p.coeffs.f = [c](double x) { return 0.8 * c(x); };
  p.coeffs.f_sup = 3.0 * 0.8;
  CHECK((solve_elliptic_ball(p, grid).values.array() + 0.8).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("identical inputs give bit-identical solutions") {
  const EllipticProblem p = bump_problem(0.3);
  const SolutionField a = solve_elliptic_ball(p, 6.0, 95);
  const SolutionField b = solve_elliptic_ball(p, 6.0, 95);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solution is monotone in the exterior value") {
  const auto grid = Grid1D<double>::with_spacing(4.0, 0.125);
  double prev_min = -1e300;
  Eigen::VectorXd prev;
  for (double gamma : {-1.0, -0.2, 0.0, 0.5, 2.0}) {
    const Eigen::VectorXd u = solve_elliptic_ball(bump_problem(gamma), grid).values;
    if (prev.size()) CHECK((u - prev).minCoeff() >= 0.0);
    prev = u;
    prev_min = u.minCoeff();
  }
  CHECK(prev_min > 0.0);
}

TEST_CASE("discrete comparison principle") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto grid = Grid1D<double>::with_spacing(3.0, 0.125);
  const DiscreteFracOp op = build_discrete_op(grid, 0.25);
  for (int trial = 0; trial < 100; ++trial) {
    CoefficientField k;
    set_power_law_a(k, 1.0, 1.5, 1.0 + u01(rng));
    set_gaussian_well_c(k, 2.0 * u01(rng), 0.5 + u01(rng));
    const Eigen::MatrixXd M = elliptic_matrix(op, k);
    Eigen::VectorXd rhs(grid.size());
    const double delta = u01(rng);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      rhs[i] = u01(rng) + k.a(grid.node(i)) * op.normalization() * op.exterior_coupling()[i] * delta;
    }
    const Eigen::VectorXd w = M.partialPivLu().solve(rhs);
    CHECK(w.minCoeff() >= 0.0);
  }
}

TEST_CASE("elliptic matrix structure") {
  const auto grid = Grid1D<double>::with_spacing(2.0, 0.25);
  const DiscreteFracOp op = build_discrete_op(grid, 0.3);
  CoefficientField k = power_law_coefficients(1.0, 1.5);
  set_constant_c(k, -0.5);
  const Eigen::MatrixXd M = elliptic_matrix(op, k);
  const Eigen::MatrixXd A = op.matrix();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double a = k.a(grid.node(i));
    CHECK(M(i, i) == doctest::Approx(a * A(i, i) + 0.5));
    CHECK(M.row(i).sum() > 0.0);
  }
}

TEST_CASE("nested schedule") {
  const NestedSchedule sch{8.0, 0.125, 4};
  const auto L = sch.half_widths();
  REQUIRE(L.size() == 4);
  CHECK(L[3] == 64.0);
  CHECK(sch.grid(2).spacing() == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(sch.grid(2).half_width() == 32.0);
  CHECK_THROWS_AS(validate(NestedSchedule{8.0, 0.3, 4}), DomainError);
  CHECK_THROWS_AS(validate(NestedSchedule{8.0, 0.125, 0}), DomainError);
}

TEST_CASE("nested limit trace decreases") {
  const NestedResult r = elliptic_nested_limit(bump_problem(), NestedSchedule{4.0, 0.25, 4}, 3.0, 1e-12);
  REQUIRE(r.trace.size() == 3);
  CHECK(r.trace[1] < r.trace[0]);
  CHECK(r.trace[2] < r.trace[1]);
  CHECK_FALSE(r.converged);
  CHECK(r.solution.grid.half_width() == 32.0);

  const NestedResult loose = elliptic_nested_limit(bump_problem(), NestedSchedule{4.0, 0.25, 6}, 3.0, 1.0);
  CHECK(loose.converged);
  CHECK(loose.half_widths.size() == 2);
}

TEST_CASE("window difference and exterior lookup") {
  const EllipticProblem p = bump_problem(0.25);
  const SolutionField a = solve_elliptic_ball(p, Grid1D<double>::with_spacing(4.0, 0.25));
  const SolutionField b = solve_elliptic_ball(p, Grid1D<double>::with_spacing(8.0, 0.25));
  CHECK(window_difference(a, a, 3.0) == 0.0);
  CHECK(window_difference(a, b, 3.0) > 0.0);
  CHECK(window_difference(a, b, 3.0) == window_difference(b, a, 3.0));
  CHECK(a.at(10.0) == 0.25);
  CHECK(a.at(a.grid.node(7)) == a.values[7]);
}

TEST_CASE("decay bound against the global barrier") {
  const EllipticProblem p = bump_problem(0.5);
  CoefficientField k = power_law_coefficients(1.0, 1.5);
  const DecayBarrierV V = select_V_params(1, 0.25, k);
  const GlobalBarrierH h = assemble_global_barrier(1, 0.25, k, V);
  const DecayReport d = verify_elliptic_decay(solve_elliptic_ball(p, 16.0, 255), p, h);
  CHECK(d.pass);
  CHECK(d.M == doctest::Approx(1.0));
  CHECK(d.tail_residual > 0.0);
}

TEST_CASE("problem preconditions") {
  EllipticProblem p = bump_problem();
  CHECK_NOTHROW(validate(p));
  p.s = 0.5;
  CHECK_THROWS_AS(validate(p), HypothesisError);
  p = bump_problem();
  set_constant_c(p.coeffs, 0.2);
  CHECK_THROWS_AS(validate(p), HypothesisError);
  p = bump_problem();
  p.N = 3;
  CHECK_THROWS_AS(validate(p), HypothesisError);
}
