#include "fracinf/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracinf/errors.hpp"
#include "json.hpp"

namespace fracinf {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Certificate make_certificate(std::string name, std::string tag, double value, std::string relation, double threshold,
                             std::string detail) {
  Certificate c{std::move(name), std::move(tag), value, threshold, std::move(relation), false, std::move(detail)};
  if (c.relation == ">=") c.pass = value >= threshold;
  else if (c.relation == ">") c.pass = value > threshold;
  else if (c.relation == "<=") c.pass = value <= threshold;
  else if (c.relation == "<") c.pass = value < threshold;
  else if (c.relation == "==") c.pass = value == threshold;
  else throw DomainError("make_certificate: unknown relation " + c.relation);
  return c;
}

bool Report::all_pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& c : certificates) n += c.pass ? 0 : 1;
  return n;
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& [k, v] : other.parameters) parameters.emplace_back(prefix + "." + k, v);
  for (Certificate c : other.certificates) {
    c.name = prefix + "." + c.name;
    certificates.push_back(std::move(c));
  }
  for (Series s : other.traces) {
    s.name = prefix + "." + s.name;
    traces.push_back(std::move(s));
  }
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << "scenario: " << r.scenario << "\n";
  os << "parameters:\n";
  for (const auto& [k, v] : r.parameters) os << "  " << k << " = " << format_number(v) << "\n";
  os << "certificates:\n";
  for (const auto& c : r.certificates) {
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": " << format_number(c.value) << " "
       << c.relation << " " << format_number(c.threshold) << "  (" << c.paper_ref << ")";
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  for (const auto& s : r.traces) {
    os << "trace " << s.name << ":";
    constexpr std::size_t kShown = 12;
    const std::size_t n = s.y.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (n > kShown && i == kShown / 2) {
        os << " ... (" << n << " points)";
        i = n - kShown / 2;
      }
      os << " " << format_number(s.x[i]) << ":" << format_number(s.y[i]);
    }
    os << "\n";
  }
  os << "summary: " << (r.certificates.size() - r.failures()) << "/" << r.certificates.size() << " passed\n";
  return os.str();
}

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::string to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["scenario"] = r.scenario;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.parameters) j["parameters"][k] = number(v);
  j["certificates"] = nlohmann::ordered_json::array();
  for (const auto& c : r.certificates) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["paper_ref"] = c.paper_ref;
    e["value"] = number(c.value);
    e["threshold"] = number(c.threshold);
    e["relation"] = c.relation;
    e["pass"] = c.pass;
    if (!c.detail.empty()) e["detail"] = c.detail;
    j["certificates"].push_back(std::move(e));
  }
  j["traces"] = nlohmann::ordered_json::array();
  for (const auto& s : r.traces) {
    nlohmann::ordered_json e;
    e["name"] = s.name;
    e["x"] = nlohmann::ordered_json::array();
    e["y"] = nlohmann::ordered_json::array();
    for (double v : s.x) e["x"].push_back(number(v));
    for (double v : s.y) e["y"].push_back(number(v));
    j["traces"].push_back(std::move(e));
  }
  j["summary"] = {{"total", r.certificates.size()}, {"failed", r.failures()}};
  return j.dump(2) + "\n";
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "name,paper_ref,value,relation,threshold,pass\n";
  for (const auto& c : r.certificates) {
    os << c.name << ",\"" << c.paper_ref << "\"," << format_number(c.value) << "," << c.relation << ","
       << format_number(c.threshold) << "," << (c.pass ? "true" : "false") << "\n";
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

void emit_report(const Report& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_text_file(dir / "report.txt", to_text(r));
  write_text_file(dir / "report.json", to_json(r));
  write_text_file(dir / "certificates.csv", to_csv(r));
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw DomainError("write_csv: header and column counts differ");
  std::ostringstream os;
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << format_number(columns[k][i]);
    os << "\n";
  }
  write_text_file(path, os.str());
}

}  // namespace fracinf
