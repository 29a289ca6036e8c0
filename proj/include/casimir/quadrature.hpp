#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace casimir::quadrature {

enum class Execution { serial, parallel };

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  // Bose weight below which the tail is dropped; fixes the upper cutoff.
  double tail_cut_weight = 1e-18;
  // Principal-value excision half-widths eps_k = pv_epsilon0 * 2^-k.
  double pv_epsilon0 = 1e-2;
  int pv_max_halvings = 90;
  int max_subdivisions = 40000;
  // Forced panel boundaries every `forced_spacing` from `forced_from` on (0 disables).
  double forced_spacing = 0.0;
  double forced_from = 0.0;
  Execution execution = Execution::parallel;
};

struct IntegrandValue {
  double value = 0.0;
  bool degraded = false;
};

using Integrand = std::function<IntegrandValue(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long n_evals = 0;
  std::vector<double> breakpoints_used;
  std::vector<double> pv_points;
  bool converged = false;
  bool degraded_precision = false;
  // Extrapolated estimates E(eps_K) and E(eps_{K-1}) from the two smallest
  // excisions reached, and eps_K itself.
  double pv_last = 0.0;
  double pv_previous = 0.0;
  double pv_epsilon = 0.0;
  double x_max = 0.0;
  int subdivisions = 0;
};

class PoleOverlapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Upper cutoff where exp(-2 pi x / alpha) falls to `tail_cut_weight`.
double bose_cutoff(double alpha, double tail_cut_weight);

/// 1 / (exp(2 pi x / alpha) - 1)
double bose_weight(double x, double alpha);

/// Integral over (0, inf) of f(x) / (exp(2 pi x / alpha) - 1). Panels are split at
/// every breakpoint; f must vanish at the origin fast enough to be integrable
/// against the 1/x growth of the weight.
QuadratureResult bose_integral(const Integrand& f, double alpha, std::span<const double> breakpoints,
                               const QuadratureConfig& config = {});

/// As bose_integral, with a principal value taken at each listed simple pole (or
/// jump). Around a pole p the window [p - eps0, p + eps0] is integrated as
/// f(p + u) + f(p - u) over dyadic shells in u, and the eps -> 0 limit is
/// extrapolated from the shell sequence.
QuadratureResult pv_bose_integral(const Integrand& f, double alpha, std::span<const double> poles,
                                  const QuadratureConfig& config = {},
                                  std::span<const double> breakpoints = {});

// ---------------------------------------------------------------------------

struct ModeSumConfig {
  double rel_tol = 1e-12;
  int l_floor_min = 10;
  // Summation never stops below l = floor_per_x * ceil(x_scale).
  double floor_per_x = 2.0;
  int hard_cap = 4000;
};

struct ModeSumResult {
  double value = 0.0;
  int l_max = 0;
  int l_floor = 0;
  double tail_bound = 0.0;
  bool converged = false;
  bool degraded = false;
};

/// Evaluator for term(l); the sum weights it by (2l+1).
using ModeTerm = std::function<IntegrandValue(int)>;

int mode_sum_floor(double x_scale, const ModeSumConfig& config);

/// sum_{l >= 1} (2l+1) term(l), stopped once the geometric tail bound from the
/// last three terms drops below rel_tol * |partial sum|.
ModeSumResult mode_sum(const ModeTerm& term, double x_scale, const ModeSumConfig& config = {});

}  // namespace casimir::quadrature
