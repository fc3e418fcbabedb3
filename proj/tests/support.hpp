#pragma once

#include <cmath>
#include <random>

#include "fracinf/special_functions.hpp"

namespace fracinf::testing {

// F(1 - e) = K + A e^p1 + B e^p2 + ..., with {p1, p2} = {min(d, 1), max(d, 1)}
// and d = c - a - b non-integer; two Richardson passes remove both terms.
inline double hyp_limit_richardson(double a, double b, double c, double eps = 1e-9) {
  const double d = c - a - b;
  const double p1 = std::min(d, 1.0);
  const double p2 = std::max(d, 1.0);
  const double f0 = hyp2f1(a, b, c, 1.0 - eps);
  const double f1 = hyp2f1(a, b, c, 1.0 - eps / 2.0);
  const double f2 = hyp2f1(a, b, c, 1.0 - eps / 4.0);
  const double k1 = std::exp2(p1);
  const double r0 = (k1 * f1 - f0) / (k1 - 1.0);
  const double r1 = (k1 * f2 - f1) / (k1 - 1.0);
  const double k2 = std::exp2(p2);
  return (k2 * r1 - r0) / (k2 - 1.0);
}

struct HypParams {
  double a, b, c;
};

// Admissible for hyp_limit, with c - a - b kept away from integers.
inline HypParams draw_hyp_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ua(-1.0, 1.5), ub(-1.0, 1.5), uc(0.2, 3.0);
  for (;;) {
    const HypParams p{ua(rng), ub(rng), uc(rng)};
    const double d = p.c - p.a - p.b;
    if (d <= 0.1 || d > 3.0 || p.c - p.a <= 0.05 || p.c - p.b <= 0.05) continue;
    if (std::abs(d - std::round(d)) < 0.1) continue;
    return p;
  }
}

inline double bump(double z) { return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0; }

}  // namespace fracinf::testing
