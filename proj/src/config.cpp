#include "fracinf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "fracinf/errors.hpp"
#include "fracinf/report.hpp"

namespace fracinf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError(key, "expected a real number, got '" + v + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

struct Field {
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
Field field(T ScenarioConfig::*member) {
  Field f;
  f.set = [member](ScenarioConfig& c, const std::string& key, const std::string& v) {
    if constexpr (std::is_same_v<T, double>) c.*member = parse_double(key, v);
    else if constexpr (std::is_same_v<T, int>) c.*member = parse_int(key, v);
    else if constexpr (std::is_same_v<T, bool>) c.*member = parse_bool(key, v);
    else c.*member = v;
  };
  f.get = [member](const ScenarioConfig& c) -> std::string {
    if constexpr (std::is_same_v<T, double>) return format_number(c.*member);
    else if constexpr (std::is_same_v<T, int>) return std::to_string(c.*member);
    else if constexpr (std::is_same_v<T, bool>) return c.*member ? "true" : "false";
    else return c.*member;
  };
  return f;
}

// Canonical key order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"kind", field(&ScenarioConfig::kind)},
      {"N", field(&ScenarioConfig::N)},
      {"s", field(&ScenarioConfig::s)},
      {"alpha", field(&ScenarioConfig::alpha)},
      {"C0", field(&ScenarioConfig::C0)},
      {"a.scale", field(&ScenarioConfig::a_scale)},
      {"c.family", field(&ScenarioConfig::c_family)},
      {"c.value", field(&ScenarioConfig::c_value)},
      {"c.depth", field(&ScenarioConfig::c_depth)},
      {"c.width", field(&ScenarioConfig::c_width)},
      {"f.family", field(&ScenarioConfig::f_family)},
      {"f.amplitude", field(&ScenarioConfig::f_amplitude)},
      {"f.radius", field(&ScenarioConfig::f_radius)},
      {"gamma", field(&ScenarioConfig::gamma)},
      {"parabolic.g", field(&ScenarioConfig::parabolic_g)},
      {"g.amplitude", field(&ScenarioConfig::g_amplitude)},
      {"asymptotic.g", field(&ScenarioConfig::asymptotic_g)},
      {"u0.amplitude", field(&ScenarioConfig::u0_amplitude)},
      {"u0.radius", field(&ScenarioConfig::u0_radius)},
      {"grid.L0", field(&ScenarioConfig::L0)},
      {"grid.dx", field(&ScenarioConfig::dx)},
      {"grid.levels", field(&ScenarioConfig::levels)},
      {"time.T", field(&ScenarioConfig::T)},
      {"time.dt", field(&ScenarioConfig::dt)},
      {"window", field(&ScenarioConfig::window)},
      {"tol", field(&ScenarioConfig::tol)},
      {"infinite_horizon", field(&ScenarioConfig::infinite_horizon)},
      {"output_dir", field(&ScenarioConfig::output_dir)},
  };
  return table;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    bool found = false;
    for (const auto& [name, f] : fields()) {
      if (name == key) {
        f.set(c, key, value);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError(key, "unknown key");
  }
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_string(const ScenarioConfig& c) {
  std::ostringstream os;
  for (const auto& [name, f] : fields()) os << name << " = " << f.get(c) << "\n";
  return os.str();
}

void validate(const ScenarioConfig& c) {
  static const std::vector<std::string> kinds = {"barriers", "elliptic", "parabolic", "asymptotic", "verify-all"};
  if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) throw ConfigError("kind", "unknown scenario kind '" + c.kind + "'");
  if (c.N < 1) throw ConfigError("N", "dimension must be positive");
  if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError("s", "must lie in (0, 1)");
  if (!(c.N > 2.0 * c.s)) throw ConfigError("N", "need N > 2s");
  if (!(c.alpha > 2.0 * c.s)) throw ConfigError("alpha", "need alpha > 2s");
  if (!(c.C0 > 0.0)) throw ConfigError("C0", "must be positive");
  if (!(c.a_scale >= 1.0)) throw ConfigError("a.scale", "must be at least 1");
  const bool grid_needed = c.kind != "barriers";
  if (grid_needed && c.N != 1) throw ConfigError("N", "grid solvers need N = 1");
  if (grid_needed && !(c.s < 0.5)) throw ConfigError("s", "grid solvers need s < 1/2");
  if (c.c_family != "constant" && c.c_family != "gaussian_well") throw ConfigError("c.family", "expected constant or gaussian_well");
  if (c.c_family == "gaussian_well" && !(c.c_depth >= 0.0)) throw ConfigError("c.depth", "must be nonnegative");
  if (c.c_family == "gaussian_well" && !(c.c_width > 0.0)) throw ConfigError("c.width", "must be positive");
  const bool c_positive = c.c_family == "constant" && c.c_value > 0.0;
  if (c_positive && (c.kind == "elliptic" || c.kind == "asymptotic" || c.kind == "verify-all")) {
    throw ConfigError("c.value", "this scenario needs c <= 0");
  }
  if (c_positive && c.kind == "parabolic" && c.infinite_horizon) {
    throw ConfigError("c.value", "infinite-horizon parabolic runs need c <= 0");
  }
  if (c.f_family != "bump" && c.f_family != "zero") throw ConfigError("f.family", "expected bump or zero");
  if (!(c.f_radius > 0.0)) throw ConfigError("f.radius", "must be positive");
  static const std::vector<std::string> gs = {"constant", "sine", "sin_decay", "exp_decay"};
  if (std::find(gs.begin(), gs.end(), c.parabolic_g) == gs.end()) throw ConfigError("parabolic.g", "unknown family '" + c.parabolic_g + "'");
  if (c.asymptotic_g == "sine" || std::find(gs.begin(), gs.end(), c.asymptotic_g) == gs.end()) {
    throw ConfigError("asymptotic.g", "needs a family with a limit (constant, sin_decay, exp_decay)");
  }
  if (!(c.u0_radius > 0.0)) throw ConfigError("u0.radius", "must be positive");
  if (!(c.dx > 0.0)) throw ConfigError("grid.dx", "must be positive");
  if (!(c.L0 > 0.0)) throw ConfigError("grid.L0", "must be positive");
  const double cells = 2.0 * c.L0 / c.dx;
  if (std::abs(cells - std::round(cells)) > 1e-9 * cells) throw ConfigError("grid.dx", "2 L0 must be a multiple of dx");
  if (c.levels < 3) throw ConfigError("grid.levels", "need at least 3 levels");
  if (!(c.window > 0.0 && c.window < c.L0)) throw ConfigError("window", "need 0 < window < L0");
  if (!(c.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
  if (!(c.T > 0.0)) throw ConfigError("time.T", "must be positive");
  const double steps = c.T / c.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps) throw ConfigError("time.T", "must be a multiple of dt");
  const double stride = 1.0 / c.dt;
  if (std::abs(stride - std::round(stride)) > 1e-9 * stride) throw ConfigError("time.dt", "1/dt must be an integer");
  if (!(c.tol > 0.0)) throw ConfigError("tol", "must be positive");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

}  // namespace fracinf
