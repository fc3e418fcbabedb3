#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <optional>

#include "fracinf/errors.hpp"
#include "fracinf/grid.hpp"
#include "fracinf/special_functions.hpp"

namespace fracinf {

/// V(x) = C (1 + |x|^2)^{-beta/2} in R^N, together with the constant
/// fv_const = (-Delta)^s[(1+|x|^2)^{-beta/2}](0) once calibrated.
struct RadialPowerProfile {
  double C = 1.0;
  double beta = 1.0;
  int N = 1;
  double s = 0.25;
  std::optional<double> fv_const;

  double value(double r) const { return C * std::pow(1.0 + r * r, -0.5 * beta); }
};

/// C_{N,s} |S^{N-1}| int_0^inf (1 - (1+rho^2)^{-beta/2}) rho^{-1-2s} drho.
/// Throws AccuracyError if the quadrature does not converge.
double calibrate_fv_constant(double beta, int N, double s);

/// The same constant recovered from the P.V. quadrature of V at radius r,
/// divided by the closed-form radial factor.
double calibrate_fv_by_matching(double beta, int N, double s, double r = 2.0);

/// Returns `p` with fv_const filled in.
RadialPowerProfile calibrated(RadialPowerProfile p);

/// (-Delta)^s V at |x| = r:
///   C fv (1+r^2)^{-beta/2-s} 2F1(-s, beta/2+s; N/2; r^2/(1+r^2)).
/// Throws StateError when fv_const is missing.
double frac_lap_radial_power(const RadialPowerProfile& p, double r);

/// A bounded C^2 function of one variable with its first two derivatives and
/// its limit at infinity. For N = 3 it is read as a radial profile u(|x|).
struct SmoothProfile {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double limit = 0.0;
};

SmoothProfile power_profile(double C, double beta);
SmoothProfile constant_profile(double k);
SmoothProfile gaussian_profile();

/// Principal-value quadrature of (-Delta)^s u at x (N = 1) or at radius x
/// (N = 3, radial u). The result is accurate to roughly `tol` in absolute
/// terms; throws AccuracyError carrying the best estimate otherwise.
double frac_lap_quadrature(const SmoothProfile& u, double x, double s, double tol, int N = 1);

/// Piecewise-linear discretisation of (-Delta)^s on a 1-D grid with exterior
/// data outside (-L, L):
///   (A u)_i = C_{1,s} [ sum_j w_|i-j| (u_i - u_j) + e_i (u_i - g) ],
/// where e_i collects the two boundary half-cells and the two exact exterior
/// tails. The Toeplitz generator w is stored instead of the dense matrix.
template <typename Scalar = double>
class BasicDiscreteFracOp {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Pairs = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

  BasicDiscreteFracOp(Grid1D<Scalar> grid, Scalar s);

  Scalar s() const { return s_; }
  const Grid1D<Scalar>& grid() const { return grid_; }
  Eigen::Index size() const { return grid_.size(); }
  Scalar normalization() const { return cns_; }

  /// w_m for offsets m = 0..n-1 (w_0 = 0), without the normalisation.
  const Vector& offset_weights() const { return w_; }
  /// Exact exterior integrals (L + x_i)^{-2s}/(2s) and (L - x_i)^{-2s}/(2s).
  const Pairs& tail_coefficients() const { return tails_; }
  /// Half-cells adjoining x = -L and x = L, where the interpolant meets g.
  const Pairs& boundary_weights() const { return edges_; }
  /// e_i = tails + boundary half-cells.
  const Vector& exterior_coupling() const { return coupling_; }

  /// Dense symmetric matrix of w_|i-j| with zero diagonal (unnormalised).
  Matrix interior_weights() const;
  /// Assembled matrix A, so that A u - C e g = (A u)_{exterior g}.
  Matrix matrix() const;

 private:
  Grid1D<Scalar> grid_;
  Scalar s_;
  Scalar cns_;
  Vector w_;
  Pairs tails_;
  Pairs edges_;
  Vector coupling_;
};

using DiscreteFracOp = BasicDiscreteFracOp<double>;

/// Throws DomainError unless 0 < s < 1/2 and the grid has at least 3 nodes.
template <typename Scalar>
BasicDiscreteFracOp<Scalar> build_discrete_op(const Grid1D<Scalar>& grid, Scalar s) {
  return BasicDiscreteFracOp<Scalar>(grid, s);
}

/// A u for node values `field` and constant exterior value `exterior`.
template <typename Scalar, typename Derived>
typename BasicDiscreteFracOp<Scalar>::Vector apply_discrete(const BasicDiscreteFracOp<Scalar>& op,
                                                            const Eigen::MatrixBase<Derived>& field,
                                                            Scalar exterior);

/// A u with a spatially varying exterior profile g(y), |y| >= L. The tails
/// are integrated by quadrature after mapping each to (0, 1].
Eigen::VectorXd apply_discrete(const DiscreteFracOp& op, const Eigen::VectorXd& field,
                               const std::function<double(double)>& exterior);

// ---------------------------------------------------------------------------

namespace detail {

// Antiderivatives of |t|^{-1-2s} used for the cell integrals.
template <typename Scalar>
Scalar kernel_G(Scalar t, Scalar s) {
  using std::pow;
  if (t == Scalar(0)) return Scalar(0);
  return pow(t, Scalar(1) - Scalar(2) * s) / ((Scalar(1) - Scalar(2) * s) * (Scalar(-2) * s));
}

template <typename Scalar>
Scalar kernel_dG(Scalar t, Scalar s) {
  using std::pow;
  return pow(t, Scalar(-2) * s) / (Scalar(-2) * s);
}

// Second difference G(m+1) - 2G(m) + G(m-1), expanded asymptotically for large m.
template <typename Scalar>
Scalar second_difference(Eigen::Index m, Scalar s) {
  using std::pow;
  const Scalar mm = Scalar(m);
  if (m < 100) {
    return kernel_G(mm + Scalar(1), s) - Scalar(2) * kernel_G(mm, s) + kernel_G(mm - Scalar(1), s);
  }
  const Scalar p = Scalar(1) + Scalar(2) * s;
  const Scalar x = Scalar(1) / (mm * mm);
  const Scalar c4 = p * (p + 1) / Scalar(12);
  const Scalar c6 = c4 * (p + 2) * (p + 3) / Scalar(30);
  const Scalar c8 = c6 * (p + 4) * (p + 5) / Scalar(56);
  return pow(mm, -p) * (Scalar(1) + x * (c4 + x * (c6 + x * c8)));
}

// int_{m-1}^{m} (t - m + 1) t^{-1-2s} dt, the half-hat cell next to the boundary.
template <typename Scalar>
Scalar edge_cell(Eigen::Index m, Scalar s) {
  const Scalar mm = Scalar(m);
  return kernel_dG(mm, s) - (kernel_G(mm, s) - kernel_G(mm - Scalar(1), s));
}

}  // namespace detail

template <typename Scalar>
BasicDiscreteFracOp<Scalar>::BasicDiscreteFracOp(Grid1D<Scalar> grid, Scalar s) : grid_(grid), s_(s) {
  if (!(s > Scalar(0) && s < Scalar(0.5))) throw DomainError("build_discrete_op: s must lie in (0, 1/2)");
  if (grid.size() < 3) throw DomainError("build_discrete_op: need at least 3 interior nodes");
  using std::pow;
  const Eigen::Index n = grid.size();
  const Scalar h = grid.spacing();
  const Scalar scale = pow(h, Scalar(-2) * s);
  cns_ = Scalar(c_ns(1, static_cast<double>(s)));

  w_.setZero(n);
  for (Eigen::Index m = 1; m < n; ++m) w_[m] = scale * detail::second_difference(m, s);

  tails_.resize(n, 2);
  edges_.resize(n, 2);
  coupling_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index ml = i + 1;  // distance to -L in cells
    const Eigen::Index mr = n - i;  // distance to +L in cells
    tails_(i, 0) = pow(Scalar(ml) * h, Scalar(-2) * s) / (Scalar(2) * s);
    tails_(i, 1) = pow(Scalar(mr) * h, Scalar(-2) * s) / (Scalar(2) * s);
    edges_(i, 0) = scale * detail::edge_cell(ml, s);
    edges_(i, 1) = scale * detail::edge_cell(mr, s);
    coupling_[i] = (edges_(i, 0) + tails_(i, 0)) + (edges_(i, 1) + tails_(i, 1));
  }
}

template <typename Scalar>
typename BasicDiscreteFracOp<Scalar>::Matrix BasicDiscreteFracOp<Scalar>::interior_weights() const {
  const Eigen::Index n = size();
  Matrix W(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) W(i, j) = w_[i > j ? i - j : j - i];
  return W;
}

template <typename Scalar>
typename BasicDiscreteFracOp<Scalar>::Matrix BasicDiscreteFracOp<Scalar>::matrix() const {
  const Eigen::Index n = size();
  Matrix A(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) A(i, j) = -cns_ * w_[i > j ? i - j : j - i];
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar row = coupling_[i];
    for (Eigen::Index j = 0; j < n; ++j) row += w_[i > j ? i - j : j - i];
    A(i, i) = cns_ * row;
  }
  return A;
}

template <typename Scalar, typename Derived>
typename BasicDiscreteFracOp<Scalar>::Vector apply_discrete(const BasicDiscreteFracOp<Scalar>& op,
                                                            const Eigen::MatrixBase<Derived>& field,
                                                            Scalar exterior) {
  const Eigen::Index n = op.size();
  if (field.size() != n) throw DomainError("apply_discrete: field length does not match the grid");
  const auto& w = op.offset_weights();
  const auto& e = op.exterior_coupling();
  typename BasicDiscreteFracOp<Scalar>::Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar ui = field(i);
    Scalar acc = e[i] * (ui - exterior);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) acc += w[i > j ? i - j : j - i] * (ui - field(j));
    }
    out[i] = op.normalization() * acc;
  }
  return out;
}

}  // namespace fracinf
