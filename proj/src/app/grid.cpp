#include "casimir/app/grid.hpp"

#include <cmath>
#include <regex>
#include <sstream>

namespace casimir::app {

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw ConfigError("linspace: n must be >= 1");
  if (n == 1) return {a};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

std::vector<double> logspace(double a, double b, int n) {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("logspace: endpoints must be > 0");
  if (n < 1) throw ConfigError("logspace: n must be >= 1");
  if (n == 1) return {a};
  std::vector<double> out(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * i / (n - 1));
  out.front() = a;
  out.back() = b;
  return out;
}

std::vector<double> parse_value_list(const std::string& text, const std::string& key) {
  static const std::regex range(R"(^\s*(linspace|logspace)\s*\(\s*([^,]+),\s*([^,]+),\s*([^,)]+)\)\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, range)) {
    const double a = parse_double(m[2], key), b = parse_double(m[3], key);
    const int n = parse_int(m[4], key);
    return m[1] == "linspace" ? linspace(a, b, n) : logspace(a, b, n);
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    const std::string name = item.substr(b, e - b + 1);
    const auto m = parse_method(name);
    if (!m) throw ConfigError("unknown method '" + name + "'");
    out.push_back(*m);
  }
  return out;
}

void SweepGrid::validate() const {
  if (lambda0_values.empty()) throw ConfigError("grid: lambda0 list is empty");
  if (t_values.empty()) throw ConfigError("grid: t list is empty");
  if (methods.empty()) throw ConfigError("grid: method list is empty");
  for (double v : lambda0_values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("grid: lambda0 values must be > 0");
  }
  for (double v : t_values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("grid: t values must be > 0");
  }
}

SweepGrid grid_from_keyvalues(const KeyValues& kv) {
  SweepGrid g;
  if (auto it = kv.find("lambda0"); it != kv.end()) g.lambda0_values = parse_value_list(it->second, "lambda0");
  if (auto it = kv.find("t"); it != kv.end()) g.t_values = parse_value_list(it->second, "t");
  if (auto it = kv.find("methods"); it != kv.end()) g.methods = parse_methods(it->second);
  if (auto it = kv.find("method"); it != kv.end()) g.methods = parse_methods(it->second);
  return g;
}

KeyValues apply_config(const KeyValues& kv, RunConfig& cfg) {
  KeyValues rest;
  auto& quad = cfg.eval.exact.quad;
  for (const auto& [key, value] : kv) {
    if (key == "rel_tol") {
      quad.rel_tol = parse_double(value, key);
    } else if (key == "abs_tol") {
      quad.abs_tol = parse_double(value, key);
    } else if (key == "tail_cut_weight") {
      quad.tail_cut_weight = parse_double(value, key);
    } else if (key == "pv_epsilon0") {
      quad.pv_epsilon0 = parse_double(value, key);
    } else if (key == "max_subdivisions") {
      quad.max_subdivisions = parse_int(value, key);
    } else if (key == "mode_rel_tol") {
      cfg.eval.exact.modes.rel_tol = parse_double(value, key);
    } else if (key == "mode_hard_cap") {
      cfg.eval.exact.modes.hard_cap = parse_int(value, key);
    } else if (key == "feature_floor") {
      cfg.eval.exact.feature_floor = parse_double(value, key);
    } else if (key == "precision") {
      if (value == "automatic") cfg.eval.exact.precision = PrecisionPolicy::automatic;
      else if (value == "standard") cfg.eval.exact.precision = PrecisionPolicy::standard;
      else if (value == "extended") cfg.eval.exact.precision = PrecisionPolicy::extended;
      else throw ConfigError("precision: expected automatic, standard or extended");
    } else if (key == "lowT_form") {
      if (value == "arctan") cfg.eval.lowT_form = LowTForm::arctan;
      else if (value == "linearized") cfg.eval.lowT_form = LowTForm::linearized;
      else throw ConfigError("lowT_form: expected arctan or linearized");
    } else if (key == "workers") {
      cfg.workers = parse_int(value, key);
      if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
    } else if (key == "entropy") {
      cfg.entropy = parse_bool(value, key);
    } else if (key == "stencil_h") {
      cfg.stencil_h = parse_double(value, key);
    } else {
      rest.emplace(key, value);
    }
  }
  if (!(quad.rel_tol > 0.0) || !(quad.abs_tol > 0.0)) throw ConfigError("tolerances must be > 0");
  return rest;
}

}  // namespace casimir::app
