#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/app/keyvalue.hpp"
#include "casimir/freeenergy.hpp"

namespace casimir::app {

/// A value list: `0.5, 1, 2`, `linspace(a, b, n)` or `logspace(a, b, n)`
/// (endpoints given directly, not as exponents).
std::vector<double> parse_value_list(const std::string& text, const std::string& key);
std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);

/// Tunables shared by eval, sweep and figure.
struct RunConfig {
  EvalConfig eval;
  int workers = 0;  // 0: available parallelism
  bool entropy = false;
  std::optional<double> stencil_h;
};

/// Applies recognised keys (rel_tol, abs_tol, tail_cut_weight, pv_epsilon0,
/// max_subdivisions, mode_rel_tol, mode_hard_cap, precision, lowT_form,
/// workers, entropy, stencil_h) and returns the keys it did not consume.
KeyValues apply_config(const KeyValues& kv, RunConfig& cfg);

struct SweepGrid {
  std::vector<double> lambda0_values;
  std::vector<double> t_values;
  std::vector<Method> methods;

  std::size_t size() const { return lambda0_values.size() * t_values.size() * methods.size(); }
  void validate() const;
};

/// Grid from keys `lambda0`, `t`, `methods`; other keys are left to apply_config.
SweepGrid grid_from_keyvalues(const KeyValues& kv);
std::vector<Method> parse_methods(const std::string& text);

}  // namespace casimir::app
