#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "casimir/quadrature.hpp"

namespace casimir::quadrature {

int mode_sum_floor(double x_scale, const ModeSumConfig& config) {
  const double by_x = config.floor_per_x * std::ceil(std::max(x_scale, 0.0));
  return std::max(config.l_floor_min, static_cast<int>(std::ceil(by_x)));
}

ModeSumResult mode_sum(const ModeTerm& term, double x_scale, const ModeSumConfig& config) {
  if (!(config.rel_tol > 0.0)) throw std::domain_error("mode_sum: rel_tol must be > 0");
  ModeSumResult out;
  out.l_floor = std::min(mode_sum_floor(x_scale, config), config.hard_cap);

  double sum = 0.0;
  double comp = 0.0;  // Kahan compensation
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;  // last three weighted terms, t3 newest
  for (int l = 1; l <= config.hard_cap; ++l) {
    const IntegrandValue v = term(l);
    out.degraded = out.degraded || v.degraded;
    const double weighted = (2.0 * l + 1.0) * v.value;
    const double y = weighted - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    t1 = t2;
    t2 = t3;
    t3 = weighted;
    out.l_max = l;
    if (l < out.l_floor || l < 3) continue;

    double tail;
    if (t3 == 0.0 && t2 == 0.0 && t1 == 0.0) {
      tail = 0.0;
    } else if (t2 == 0.0 || t1 == 0.0) {
      continue;
    } else {
      const double q = std::max(std::abs(t3 / t2), std::abs(t2 / t1));
      if (q >= 1.0) continue;
      tail = std::abs(t3) * q / (1.0 - q);
    }
    if (tail <= config.rel_tol * std::abs(sum) || tail == 0.0) {
      out.tail_bound = tail;
      out.converged = true;
      break;
    }
  }
  out.value = sum;
  return out;
}

}  // namespace casimir::quadrature
