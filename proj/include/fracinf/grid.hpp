#pragma once

#include <Eigen/Core>
#include <cmath>

#include "fracinf/errors.hpp"

namespace fracinf {

/// Uniform grid of `n_interior` nodes strictly inside (-L, L):
///   x_i = -L + (i + 1) dx,  dx = 2L / (n_interior + 1).
template <typename Scalar = double>
class Grid1D {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Grid1D() = default;
  Grid1D(Scalar half_width, Eigen::Index n_interior) : half_width_(half_width), n_(n_interior) {
    if (!(half_width > Scalar(0))) throw DomainError("Grid1D: half width must be positive");
    if (n_interior < 1) throw DomainError("Grid1D: need at least one interior node");
  }

  /// Grid of half width L whose spacing is `dx`; L / dx must be (close to) an integer.
  static Grid1D with_spacing(Scalar half_width, Scalar dx) {
    if (!(dx > Scalar(0))) throw DomainError("Grid1D: spacing must be positive");
    using std::round;
    const Scalar cells = round(Scalar(2) * half_width / dx);
    using std::abs;
    if (abs(cells * dx - Scalar(2) * half_width) > Scalar(1e-9) * half_width) {
      throw DomainError("Grid1D: 2L must be an integer multiple of dx");
    }
    return Grid1D(half_width, static_cast<Eigen::Index>(cells) - 1);
  }

  Scalar half_width() const { return half_width_; }
  Eigen::Index size() const { return n_; }
  Scalar spacing() const { return Scalar(2) * half_width_ / Scalar(n_ + 1); }
  Scalar node(Eigen::Index i) const { return -half_width_ + Scalar(i + 1) * spacing(); }

  Vector nodes() const {
    Vector x(n_);
    for (Eigen::Index i = 0; i < n_; ++i) x[i] = node(i);
    return x;
  }

  /// Index of the node closest to `x` (clamped to the grid).
  Eigen::Index nearest(Scalar x) const {
    using std::round;
    const Scalar k = round((x + half_width_) / spacing()) - Scalar(1);
    if (k < Scalar(0)) return 0;
    if (k > Scalar(n_ - 1)) return n_ - 1;
    return static_cast<Eigen::Index>(k);
  }

 private:
  Scalar half_width_ = Scalar(1);
  Eigen::Index n_ = 1;
};

}  // namespace fracinf
