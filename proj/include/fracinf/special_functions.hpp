#pragma once

namespace fracinf {

/// Parameters of a real Gauss hypergeometric evaluation 2F1(a, b; c; z).
struct Hyp2F1Query {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double z = 0.0;
};

/// Gamma function for t > 0 (Lanczos, g = 7, with reflection below 1/2).
/// Throws DomainError for t <= 0.
double gamma(double t);

/// log Gamma(t) for t > 0.
double log_gamma(double t);

/// Real 2F1 for c > 0 and z < 1.
///
/// Negative arguments are mapped into [0, 1) by Pfaff's transformation
///   F(a,b;c;z) = (1-z)^{-b} F(c-a, b; c; z/(z-1)).
/// On [0, 1/2) the power series is summed directly (term-ratio stop at 1e-16,
/// cap 10000 terms). On [1/2, 1) the solution of the hypergeometric ODE is
/// continued from z = 1/2 by local Taylor expansions whose steps shrink
/// geometrically toward the singular point z = 1; this works uniformly in
/// c - a - b, including the logarithmic integer cases.
///
/// Throws DomainError for z >= 1 or c <= 0, AccuracyError if a series fails
/// to converge within its cap.
double hyp2f1(const Hyp2F1Query& q);

inline double hyp2f1(double a, double b, double c, double z) {
  return hyp2f1(Hyp2F1Query{a, b, c, z});
}

/// lim_{z -> 1^-} 2F1(a,b;c;z) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).
/// Requires c, c-a-b, c-a, c-b all positive.
double hyp_limit(double a, double b, double c);

/// Normalisation C_{N,s} of the singular-integral fractional Laplacian.
double c_ns(int N, double s);

/// Surface measure of the unit sphere S^{N-1} in R^N (2 for N = 1).
double unit_sphere_measure(int N);

}  // namespace fracinf
