#pragma once

#include <string>

namespace fracinf {

/// Flat `key = value` scenario description. Lines starting with '#' are
/// comments. Unknown keys and malformed values raise ConfigError naming the key.
struct ScenarioConfig {
  std::string kind = "verify-all";  // barriers | elliptic | parabolic | asymptotic | verify-all

  int N = 1;
  double s = 0.25;
  double alpha = 1.5;
  double C0 = 1.0;
  double a_scale = 1.0;

  std::string c_family = "constant";  // constant | gaussian_well
  double c_value = 0.0;
  double c_depth = 1.0;
  double c_width = 1.0;

  std::string f_family = "bump";  // bump | zero
  double f_amplitude = 1.0;
  double f_radius = 1.0;

  double gamma = 0.0;  // exterior value / limit of g
  std::string parabolic_g = "sine";        // constant | sine | sin_decay | exp_decay
  double g_amplitude = 1.0;                // amplitude of the sine family
  std::string asymptotic_g = "exp_decay";  // constant | sin_decay | exp_decay

  double u0_amplitude = 0.0;  // u0 = g(0) + amplitude * bump(x / u0_radius)
  double u0_radius = 1.0;

  double L0 = 8.0;
  double dx = 0.125;
  int levels = 5;
  double T = 50.0;
  double dt = 0.05;
  double window = 5.0;
  double tol = 1e-4;
  bool infinite_horizon = true;

  std::string output_dir = "fracinf-out";

  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Canonical text form; parse_config(to_string(c)) == c.
std::string to_string(const ScenarioConfig& c);

/// Re-checks the structural hypotheses. Throws ConfigError with the key.
void validate(const ScenarioConfig& c);

}  // namespace fracinf
