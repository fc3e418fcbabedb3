#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "fracinf/coefficients.hpp"
#include "fracinf/frac_operator.hpp"
#include "fracinf/grid.hpp"

namespace fracinf {

/// V = C (1 + r^2)^{-beta/2} with a(-Delta)^s V >= 1 outside B_{R0}.
struct DecayBarrierV {
  RadialPowerProfile profile;
  double R0 = 1.0;
  double K = 0.0;

  double C() const { return profile.C; }
  double beta() const { return profile.beta; }
  double fv_const() const { return *profile.fv_const; }
  double value(double r) const { return profile.value(r); }
  double derivative(double r) const {
    return -profile.C * profile.beta * r * std::pow(1.0 + r * r, -0.5 * profile.beta - 1.0);
  }
  double frac_lap(double r) const { return frac_lap_radial_power(profile, r); }
};

struct MarginReport {
  std::vector<double> points;
  std::vector<double> margins;
  double min_margin = 0.0;
  double argmin = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// beta = min(0.9 (N - 2s), alpha - 2s), K = lim F(-s, beta/2+s; N/2; z->1),
/// C = 2 / (C0 fv K) (1 + 1e-9), and R0 from a doubling scan on which
/// F(-s, beta/2+s; N/2; r^2/(1+r^2)) >= K/2 holds for all sampled r >= R0.
DecayBarrierV select_V_params(int N, double s, const CoefficientField& coeffs);

/// `count` log-spaced radii in [lo, hi].
std::vector<double> log_radii(double lo, double hi, int count);

/// margin(r) = a(r) (-Delta)^s V(r) - 1; passes iff min margin >= -1e-6.
MarginReport verify_V_supersolution(const DecayBarrierV& V, const CoefficientField& coeffs,
                                    const std::vector<double>& radii);

/// W(x) = C1 (R^2 - |x|^2)_+^s, which solves (-Delta)^s W = 1 in B_R.
struct ExitTimeSolution {
  double R_hat = 1.0;
  double C1 = 1.0;
  int N = 1;
  double s = 0.25;

  double value(double r) const {
    const double q = R_hat * R_hat - r * r;
    return q > 0.0 ? C1 * std::pow(q, s) : 0.0;
  }
  double derivative(double r) const {
    const double q = R_hat * R_hat - r * r;
    return q > 0.0 ? -2.0 * s * C1 * r * std::pow(q, s - 1.0) : 0.0;
  }
};

ExitTimeSolution getoor(double R_hat, int N, double s);

/// Slacks of the inequalities certified during assembly (all must be > 0).
struct BarrierSlacks {
  double lower_321 = 0.0;   // mu2 - vbar C (1 + (R/2)^2)^{-beta/2}
  double upper_321 = 0.0;   // vbar C - mu1 W_hat(0) - mu2
  double sufficient_326 = 0.0;  // beta mu2 - s mu1 C1 (1 + R^2)
  double derivative = 0.0;  // W'(Rbar) - V~'(Rbar)
  double crossing_inner = 0.0;  // Rbar - R0
  double crossing_outer = 0.0;  // R/2 - Rbar
};

/// h = Cbar min{V~, W}, V~ = vbar V, W = mu1 W_hat + mu2.
struct GlobalBarrierH {
  DecayBarrierV V;
  ExitTimeSolution W_hat;
  double mu0 = 1.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double vbar_scale = 1.0;
  double delta = 0.0;
  double nu = 0.0;
  double R_hat = 1.0;
  double R_bar = 1.0;
  double final_scale = 1.0;
  BarrierSlacks slacks;
  std::vector<std::string> attempts;  // one line per rejected R_hat

  double V_tilde(double r) const { return vbar_scale * V.value(r); }
  double W(double r) const { return mu1 * W_hat.value(r) + mu2; }
  double value(double r) const {
    r = std::abs(r);
    return final_scale * std::min(V_tilde(r), W(r));
  }
};

/// Bisection for V~ = W on [lo, hi] down to |hi - lo| <= 1e-12 scale.
/// Throws ConstructionError without a sign change.
double find_crossing(const std::function<double(double)>& V_tilde, const std::function<double(double)>& W,
                     double lo, double hi, double scale);

/// Doubling search over R_hat starting at 2 max(2, 2 R0).
GlobalBarrierH assemble_global_barrier(int N, double s, const CoefficientField& coeffs,
                                       const DecayBarrierV& V, double mu0 = 1.0);

/// Number of sign changes of V~ - W over `samples` uniform points of (0, R_hat).
int crossing_sign_changes(const GlobalBarrierH& h, int samples = 10000);

/// a(x_i) (A h)_i at every node, exterior values taken from h itself.
/// Passes iff the minimum is >= 0.95. Needs N = 1 and half width >= 4 R_hat.
MarginReport verify_h_supersolution(const GlobalBarrierH& h, const CoefficientField& coeffs,
                                    const Grid1D<double>& grid);

/// Default certification grid: half width 4 R_hat with 4095 interior nodes.
Grid1D<double> certification_grid(const GlobalBarrierH& h);

/// V0 = h - inf h + 1 = h + 1.
struct BarrierV0 {
  GlobalBarrierH h;
  double value(double r) const { return h.value(r) + 1.0; }
  double sup() const { return h.value(0.0) + 1.0; }
};

BarrierV0 build_V0(const GlobalBarrierH& h);

}  // namespace fracinf
