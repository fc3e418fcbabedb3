#pragma once

#include <filesystem>
#include <optional>

#include "fracinf/coefficients.hpp"
#include "fracinf/config.hpp"
#include "fracinf/parabolic.hpp"
#include "fracinf/report.hpp"

namespace fracinf {

struct RunSettings {
  std::filesystem::path out_dir = "fracinf-out";
  std::optional<double> tol;  // overrides ScenarioConfig::tol
  bool parallel = false;      // run the verify-all pipelines concurrently
  bool write_files = true;
};

struct ScenarioResult {
  Report report;
  int exit_code = 0;  // 0 iff every certificate passes
};

CoefficientField make_coefficients(const ScenarioConfig& c);
ParabolicProblem make_parabolic_problem(const ScenarioConfig& c, bool asymptotic);

Report run_barriers(const ScenarioConfig& c, const RunSettings& settings);
Report run_elliptic(const ScenarioConfig& c, const RunSettings& settings);
Report run_parabolic(const ScenarioConfig& c, const RunSettings& settings);
Report run_asymptotic(const ScenarioConfig& c, const RunSettings& settings);

/// Validates, runs the pipeline named by `c.kind`, and writes the report
/// (report.txt, report.json, certificates.csv) plus data and plots.
ScenarioResult run_scenario(ScenarioConfig c, const RunSettings& settings);

}  // namespace fracinf
