#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fracinf {

/// One certified quantity: `value relation threshold` must hold.
struct Certificate {
  std::string name;
  std::string paper_ref;  // short descriptive tag of the property certified
  double value = 0.0;
  double threshold = 0.0;
  std::string relation = ">=";  // one of >=, >, <=, <, ==
  bool pass = false;
  std::string detail;
};

/// Builds a certificate and evaluates `pass` from the relation.
Certificate make_certificate(std::string name, std::string tag, double value, std::string relation, double threshold,
                             std::string detail = {});

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Report {
  std::string scenario;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<Certificate> certificates;
  std::vector<Series> traces;

  bool all_pass() const;
  std::size_t failures() const;
  void merge(const Report& other, const std::string& prefix);
};

inline constexpr const char* kReportSchema = "fracinf.report/1";

std::string to_text(const Report& r);
std::string to_json(const Report& r);
/// name,paper_ref,value,relation,threshold,pass
std::string to_csv(const Report& r);

/// Writes report.txt, report.json and certificates.csv into `dir`
/// (created if needed). Throws IoError when the directory is not writable.
void emit_report(const Report& r, const std::filesystem::path& dir);

/// Deterministic shortest round-trip formatting of a double.
std::string format_number(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Column-major CSV with a header line.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Static SVG line plot of one or more series.
void write_line_plot(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<Series>& series, bool log_y = false);

}  // namespace fracinf
