#include <cmath>
#include <random>

#include "doctest.h"
#include "fracinf/barriers.hpp"
#include "fracinf/errors.hpp"
#include "fracinf/frac_operator.hpp"

using namespace fracinf;

TEST_CASE("closed form matches the quadrature oracle") {
  const RadialPowerProfile p = calibrated(RadialPowerProfile{1.0, 0.45, 1, 0.25, std::nullopt});
  const SmoothProfile u = power_profile(1.0, 0.45);
  for (double r : {0.0, 0.5, 2.0, 5.0, 20.0}) {
    const double closed = frac_lap_radial_power(p, r);
    CHECK(frac_lap_quadrature(u, r, 0.25, 1e-12) == doctest::Approx(closed).epsilon(1e-4));
  }
  const RadialPowerProfile q = calibrated(RadialPowerProfile{1.0, 1.0, 3, 0.3, std::nullopt});
  for (double r : {0.0, 0.5, 2.0, 5.0, 20.0}) {
    CHECK(frac_lap_quadrature(power_profile(1.0, 1.0), r, 0.3, 1e-12, 3) ==
          doctest::Approx(frac_lap_radial_power(q, r)).epsilon(1e-4));
  }
}

TEST_CASE("closed form at the origin and at infinity") {
  const RadialPowerProfile p = calibrated(RadialPowerProfile{3.0, 0.45, 1, 0.25, std::nullopt});
  CHECK(frac_lap_radial_power(p, 0.0) == doctest::Approx(3.0 * *p.fv_const).epsilon(1e-15));
  const double K = hyp_limit(-0.25, 0.45 / 2 + 0.25, 0.5);
  const double target = 3.0 * *p.fv_const * K;
  const auto scaled = [&](double r) { return std::pow(r, 0.45 + 0.5) * frac_lap_radial_power(p, r); };
  CHECK(scaled(1e3) == doctest::Approx(target).epsilon(0.05));
  CHECK(std::abs(scaled(1e3) - target) < std::abs(scaled(1e2) - target));
  CHECK(std::abs(scaled(1e6) - target) < std::abs(scaled(1e3) - target));
  CHECK(std::abs(scaled(1e6) - target) < 5e-3 * target);
}

TEST_CASE("fv constant: reference value, matching oracle, limits") {
  CHECK(calibrate_fv_constant(0.45, 1, 0.25) == doctest::Approx(0.4498157819).epsilon(1e-9));
  CHECK(calibrate_fv_constant(1.0, 3, 0.3) == doctest::Approx(1.0463222625).epsilon(1e-9));
  CHECK(calibrate_fv_by_matching(0.45, 1, 0.25) == doctest::Approx(calibrate_fv_constant(0.45, 1, 0.25)).epsilon(1e-3));
  CHECK(calibrate_fv_constant(1e-6, 1, 0.25) < 1e-5);
  const RadialPowerProfile a = calibrated(RadialPowerProfile{1.0, 0.45, 1, 0.25, std::nullopt});
  const RadialPowerProfile b = calibrated(RadialPowerProfile{7.0, 0.45, 1, 0.25, std::nullopt});
  CHECK(*a.fv_const == *b.fv_const);
  CHECK(frac_lap_radial_power(b, 1.7) == doctest::Approx(7.0 * frac_lap_radial_power(a, 1.7)).epsilon(1e-14));
}

TEST_CASE("uncalibrated profile is a state error") {
  CHECK_THROWS_AS(frac_lap_radial_power(RadialPowerProfile{}, 1.0), StateError);
}

TEST_CASE("quadrature oracle basics") {
  CHECK(frac_lap_quadrature(constant_profile(2.5), 0.3, 0.25, 1e-10) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(std::abs(frac_lap_quadrature(constant_profile(-1.0), 4.0, 0.3, 1e-10, 3)) < 1e-9);
  const double fv = calibrate_fv_constant(0.8, 1, 0.2);
  CHECK(std::abs(frac_lap_quadrature(power_profile(1.0, 0.8), 0.0, 0.2, 1e-9) - fv) <= 2e-9);
}

TEST_CASE("discrete operator structure") {
  const auto grid = Grid1D<double>::with_spacing(4.0, 0.25);
  const DiscreteFracOp op = build_discrete_op(grid, 0.25);
  const Eigen::MatrixXd A = op.matrix();
  const Eigen::MatrixXd W = op.interior_weights();
  CHECK((W - W.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    CHECK(A(i, i) > 0.0);
    double off = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j == i) continue;
      CHECK(A(i, j) <= 0.0);
      off += std::abs(A(i, j));
    }
    CHECK(A(i, i) > off);
    const double x = grid.node(i);
    CHECK(op.tail_coefficients()(i, 0) == doctest::Approx(std::pow(4.0 + x, -0.5) / 0.5).epsilon(1e-14));
    CHECK(op.tail_coefficients()(i, 1) == doctest::Approx(std::pow(4.0 - x, -0.5) / 0.5).epsilon(1e-14));
    CHECK(op.boundary_weights()(i, 0) >= 0.0);
    CHECK(op.boundary_weights()(i, 1) >= 0.0);
  }
  CHECK(op.normalization() == doctest::Approx(c_ns(1, 0.25)).epsilon(1e-15));
}

TEST_CASE("constant field with matching exterior is annihilated exactly") {
  for (double s : {0.05, 0.25, 0.45}) {
    const DiscreteFracOp op = build_discrete_op(Grid1D<double>::with_spacing(6.0, 0.125), s);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(op.size(), 3.75);
    CHECK(apply_discrete(op, u, 3.75).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("apply_discrete is linear and translation invariant") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  const DiscreteFracOp op = build_discrete_op(Grid1D<double>::with_spacing(3.0, 0.1), 0.3);
  Eigen::VectorXd u(op.size()), v(op.size());
  for (Eigen::Index i = 0; i < op.size(); ++i) {
    u[i] = nd(rng);
    v[i] = nd(rng);
  }
  const Eigen::VectorXd lhs = apply_discrete(op, u + v, 0.7 + -0.2);
  const Eigen::VectorXd rhs = apply_discrete(op, u, 0.7) + apply_discrete(op, v, -0.2);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff()));
  const Eigen::VectorXd shifted = apply_discrete(op, (u.array() + 5.0).matrix(), 5.5);
  CHECK((shifted - apply_discrete(op, u, 0.5)).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(apply_discrete(op, Eigen::VectorXd::Zero(op.size()), 0.0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((op.matrix() * u - apply_discrete(op, u, 0.0)).cwiseAbs().maxCoeff() < 1e-11);
  const Eigen::VectorXd viaf = apply_discrete(op, u, std::function<double(double)>([](double) { return 0.7; }));
  CHECK((viaf - apply_discrete(op, u, 0.7)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(apply_discrete(op, Eigen::VectorXd::Zero(op.size() + 1), 0.0), DomainError);
}

TEST_CASE("discrete maximum principle") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const DiscreteFracOp op = build_discrete_op(Grid1D<double>::with_spacing(2.0, 0.0625), 0.2);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd u(op.size());
    for (Eigen::Index i = 0; i < op.size(); ++i) u[i] = 2.0 * u01(rng) - 1.0;
    Eigen::Index imax = 0;
    const double top = u.maxCoeff(&imax);
    const double exterior = top - 0.1 - u01(rng);
    CHECK(apply_discrete(op, u, exterior)[imax] >= 0.0);
  }
}

TEST_CASE("Gaussian refinement ladder") {
  const SmoothProfile g = gaussian_profile();
  double prev = 0.0;
  for (int level = 0; level < 4; ++level) {
    const double dx = 0.5 / std::exp2(level);
    const auto grid = Grid1D<double>::with_spacing(20.0, dx);
    const DiscreteFracOp op = build_discrete_op(grid, 0.25);
    Eigen::VectorXd u(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) u[i] = g.value(grid.node(i));
    const Eigen::VectorXd Au = apply_discrete(op, u, 0.0);
    double err = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); i += std::max<Eigen::Index>(1, grid.size() / 64)) {
      err = std::max(err, std::abs(Au[i] - frac_lap_quadrature(g, grid.node(i), 0.25, 1e-10)));
    }
    if (level > 0) CHECK(prev / err >= 1.5);
    prev = err;
  }
}

TEST_CASE("exit-time profile is mapped to one inside the ball") {
  const ExitTimeSolution w = getoor(1.0, 1, 0.25);
  const auto grid = Grid1D<double>::with_spacing(1.0, 1.0 / 512.0);
  Eigen::VectorXd u(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) u[i] = w.value(grid.node(i));
  const Eigen::VectorXd Au = apply_discrete(build_discrete_op(grid, 0.25), u, 0.0);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.node(i)) <= 0.8) CHECK(Au[i] == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("single precision instantiation") {
  const auto grid = Grid1D<float>::with_spacing(2.0f, 0.25f);
  const BasicDiscreteFracOp<float> op = build_discrete_op(grid, 0.25f);
  const Eigen::VectorXf u = Eigen::VectorXf::Constant(op.size(), 1.5f);
  CHECK(apply_discrete(op, u, 1.5f).cwiseAbs().maxCoeff() < 1e-5f);
}

TEST_CASE("operator preconditions") {
  CHECK_THROWS_AS(build_discrete_op(Grid1D<double>(1.0, 10), 0.5), DomainError);
  CHECK_THROWS_AS(build_discrete_op(Grid1D<double>(1.0, 10), 0.0), DomainError);
  CHECK_THROWS_AS(build_discrete_op(Grid1D<double>(1.0, 2), 0.25), DomainError);
  CHECK_THROWS_AS(Grid1D<double>::with_spacing(1.0, 0.3), DomainError);
  CHECK_THROWS_AS(Grid1D<double>(0.0, 4), DomainError);
}
