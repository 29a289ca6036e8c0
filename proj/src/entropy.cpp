#include <algorithm>
#include <cmath>
#include <sstream>

#include "casimir/freeenergy.hpp"

namespace casimir::freeenergy {

double default_stencil(double t) {
  const double h = std::max(1e-3, t / 20.0);
  return t - 2.0 * h > 0.0 ? h : t / 4.0;
}

EntropySample entropy(const ShellParams& p, Method method, std::optional<double> stencil_h,
                      const EvalConfig& config) {
  const double t = p.t();
  const double h = stencil_h.value_or(default_stencil(t));
  if (!(h > 0.0) || !(t - 2.0 * h > 0.0)) {
    std::ostringstream os;
    os << "entropy: stencil h = " << h << " requires t - 2h > 0 at t = " << t;
    throw std::domain_error(os.str());
  }

  SampleFlags flags;
  double worst_error = 0.0;
  auto F = [&](double tt) {
    const FreeEnergySample s = evaluate(p.with_t(tt), method, config);
    flags.converged = flags.converged && s.flags.converged;
    flags.degraded = flags.degraded || s.flags.degraded;
    worst_error = std::max(worst_error, s.error_estimate);
    return s.aF;
  };

  const double fm2 = F(t - 2.0 * h), fm1 = F(t - h), fmh = F(t - 0.5 * h);
  const double fph = F(t + 0.5 * h), fp1 = F(t + h), fp2 = F(t + 2.0 * h);

  const double coarse = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
  const double fine = (-fp1 + 8.0 * fph - 8.0 * fmh + fm1) / (6.0 * h);
  const double extrapolated = (16.0 * fine - coarse) / 15.0;

  // Propagated evaluation noise: sum of |stencil coefficients| times the worst sample error.
  const double noise = (16.0 / 15.0) * 18.0 * worst_error / (6.0 * h) + (1.0 / 15.0) * 18.0 * worst_error / (12.0 * h);
  const double truncation = std::abs(extrapolated - fine);

  EntropySample s{p, method, -extrapolated, h, truncation + noise, flags};
  // Noise comparable to the derivative itself: the stencil is too narrow.
  if (noise > 0.5 * std::abs(extrapolated)) s.flags.converged = false;
  return s;
}

}  // namespace casimir::freeenergy
