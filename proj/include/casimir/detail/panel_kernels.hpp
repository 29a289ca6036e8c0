#pragma once

// Panel evaluation kernels. The serial loop is the reference; the OpenMP loop
// must produce bit-identical panel values, since each panel is evaluated by
// exactly one thread with the same operation order.

#include <cmath>
#include <limits>
#include <span>

#include "casimir/quadrature.hpp"

namespace casimir::quadrature::detail {

struct Panel {
  double a = 0.0;
  double b = 0.0;
  // Paired panels integrate f(pole + u) + f(pole - u) over u in [a, b].
  double pole = std::numeric_limits<double>::quiet_NaN();
  int window = -1;
  int shell = -1;
  int depth = 0;

  double value = 0.0;
  double error = 0.0;
  bool degraded = false;
  bool evaluated = false;

  bool paired() const { return window >= 0; }
};

struct RuleResult {
  double value = 0.0;
  double error = 0.0;
  bool degraded = false;
};

/// 21-point Kronrod rule with its embedded 10-point Gauss rule on [a, b]; nodes
/// are interior, so endpoints may sit on discontinuities.
RuleResult gauss_kronrod21(const Integrand& f, double a, double b);

/// Evaluates one panel of `weighted`, which already carries the Bose weight.
void evaluate_panel(Panel& p, const Integrand& weighted);

void evaluate_panels_serial(std::span<Panel> panels, const Integrand& weighted);
void evaluate_panels_parallel(std::span<Panel> panels, const Integrand& weighted);

/// Pairwise (recursive halving) sum; its result depends only on the input order.
double pairwise_sum(std::span<const double> values);

}  // namespace casimir::quadrature::detail
