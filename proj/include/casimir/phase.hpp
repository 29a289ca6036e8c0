#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "casimir/specfun.hpp"

namespace casimir {

/// How mode phases pick their arithmetic. `automatic` re-evaluates in extended
/// precision whenever the double evaluation trips the cancellation sentinel.
enum class PrecisionPolicy { automatic, standard, extended };

/// Reads CASIMIR_SHELL_PRECISION; "extended" forces wide floats everywhere.
PrecisionPolicy precision_policy_from_env(PrecisionPolicy fallback = PrecisionPolicy::automatic);

struct ModePhaseTerm {
  ModeIndex l;
  double x = 0.0;
  double value = 0.0;  // in (-pi/2, pi/2]
  double re = 0.0;
  double im = 0.0;
  bool degraded_precision = false;
};

/// arctan(im/re) on the principal branch (-pi/2, pi/2]; re = 0 maps to +pi/2.
/// No unwinding: the phase jumps by pi wherever re changes sign.
double arg_branch(ComplexPoint p);

/// arg[-x^2 - lambda0 f_H(l, ix)] with the principal-branch convention.
ModePhaseTerm mode_phase(ModeIndex l, double x, double lambda0,
                         PrecisionPolicy policy = PrecisionPolicy::automatic);

/// Zeros of Re[-x^2 - lambda0 f_H(l, ix)] on (0, x_max].
struct SingularitySet {
  ModeIndex l;
  std::vector<double> zeros;
  std::vector<bool> degenerate;  // parallel to zeros
  std::vector<std::pair<double, double>> brackets;
};

class MeshResolutionError : public std::runtime_error {
 public:
  MeshResolutionError(double lo, double hi);
  std::pair<double, double> cell() const noexcept { return {lo_, hi_}; }

 private:
  double lo_;
  double hi_;
};

SingularitySet find_denominator_zeros(ModeIndex l, double lambda0, double x_max);

/// Real part of the phase argument, -x^2 + lambda0 x [x j_l]'[x y_l]', evaluated
/// in extended precision when the double result is dominated by cancellation.
double denominator(ModeIndex l, double x, double lambda0);

/// Union over l of the located zeros, split into simple roots (to be paired as
/// principal-value points) and degenerate ones (plain breakpoints). A zero whose
/// phase jump is confined to a window narrower than `feature_floor * x0` is
/// invisible in double precision and is dropped.
struct PhaseSingularities {
  std::vector<double> pv_points;
  std::vector<double> breakpoints;
  int l_searched = 0;
};

PhaseSingularities collect_singularities(double lambda0, double x_max, double feature_floor = 1e-20);

}  // namespace casimir
