#include "casimir/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "casimir/detail/panel_kernels.hpp"

namespace casimir::quadrature {
namespace {

using detail::Panel;

constexpr int kInitialShells = 8;
// Relative width below which a panel is no longer bisected.
constexpr double kMinRelativeWidth = 1e-14;

struct Window {
  double pole = 0.0;
  double eps0 = 0.0;
  int shells = 0;
};

void validate(double alpha, const QuadratureConfig& c) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("bose integral: alpha must be > 0");
  if (!(c.rel_tol > 0.0) || !(c.abs_tol > 0.0)) throw std::domain_error("quadrature tolerances must be > 0");
  if (!(c.tail_cut_weight > 0.0 && c.tail_cut_weight < 1.0)) {
    throw std::domain_error("tail_cut_weight must lie in (0, 1)");
  }
  if (!(c.pv_epsilon0 > 0.0)) throw std::domain_error("pv_epsilon0 must be > 0");
}

std::vector<double> sorted_inside(std::span<const double> pts, double lo, double hi) {
  std::vector<double> out;
  for (double p : pts) {
    if (p > lo && p < hi) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Panel shell_panel(const Window& w, int window, int k) {
  Panel p;
  p.a = std::ldexp(w.eps0, -(k + 1));
  p.b = std::ldexp(w.eps0, -k);
  p.pole = w.pole;
  p.window = window;
  p.shell = k;
  return p;
}

QuadratureResult integrate(const Integrand& f, double alpha, std::span<const double> pole_list,
                           std::span<const double> breakpoint_list, const QuadratureConfig& cfg) {
  validate(alpha, cfg);
  QuadratureResult result;

  double x_max = bose_cutoff(alpha, cfg.tail_cut_weight);
  if (cfg.forced_spacing > 0.0 && x_max > cfg.forced_from) {
    x_max = cfg.forced_from + std::ceil((x_max - cfg.forced_from) / cfg.forced_spacing) * cfg.forced_spacing;
  }
  result.x_max = x_max;

  const std::vector<double> poles = sorted_inside(pole_list, 0.0, x_max);
  const std::vector<double> breaks = sorted_inside(breakpoint_list, 0.0, x_max);

  // Excision windows: half-width limited by the origin, the cutoff, and any
  // neighbouring pole or breakpoint.
  std::vector<Window> windows;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double p = poles[i];
    double eps = std::min({cfg.pv_epsilon0, 0.5 * p, 0.5 * (x_max - p)});
    if (i > 0) eps = std::min(eps, 0.5 * (p - poles[i - 1]));
    if (i + 1 < poles.size()) eps = std::min(eps, 0.5 * (poles[i + 1] - p));
    for (double b : breaks) {
      if (b != p) eps = std::min(eps, 0.5 * std::abs(b - p));
    }
    if (eps < 1e-12 * p) {
      std::ostringstream os;
      os << "principal-value pole at " << p << " overlaps a neighbouring singularity";
      throw PoleOverlapError(os.str());
    }
    windows.push_back({p, eps, kInitialShells});
  }

  auto inside_window = [&](double x) {
    for (const Window& w : windows) {
      if (x > w.pole - w.eps0 && x < w.pole + w.eps0) return true;
    }
    return false;
  };

  std::vector<double> edges{0.0, x_max};
  for (double b : breaks) edges.push_back(b);
  if (cfg.forced_spacing > 0.0) {
    for (double x = cfg.forced_from; x < x_max; x += cfg.forced_spacing) {
      if (x > 0.0 && !inside_window(x)) edges.push_back(x);
    }
  }
  for (const Window& w : windows) {
    edges.push_back(w.pole - w.eps0);
    edges.push_back(w.pole + w.eps0);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [x_max](double a, double b) { return std::abs(a - b) <= 1e-15 * x_max; }),
              edges.end());

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    if (inside_window(mid)) continue;
    Panel p;
    p.a = edges[i];
    p.b = edges[i + 1];
    panels.push_back(p);
  }
  for (std::size_t w = 0; w < windows.size(); ++w) {
    for (int k = 0; k < windows[w].shells; ++k) panels.push_back(shell_panel(windows[w], static_cast<int>(w), k));
  }

  result.breakpoints_used = breaks;
  if (cfg.forced_spacing > 0.0) {
    for (double e : edges) {
      if (e > 0.0 && e < x_max) result.breakpoints_used.push_back(e);
    }
    std::sort(result.breakpoints_used.begin(), result.breakpoints_used.end());
    result.breakpoints_used.erase(std::unique(result.breakpoints_used.begin(), result.breakpoints_used.end()),
                                  result.breakpoints_used.end());
  }
  result.pv_points = poles;

  long evals = 0;
  const Integrand weighted = [&f, alpha](double x) {
    const double w = bose_weight(x, alpha);
    if (w == 0.0) return IntegrandValue{0.0, false};
    const IntegrandValue v = f(x);
    return IntegrandValue{v.value * w, v.degraded};
  };

  const IntegrandValue at_cut = f(x_max);
  ++evals;
  const double tail_error = std::abs(at_cut.value) * alpha / (2.0 * std::numbers::pi) * cfg.tail_cut_weight;

  std::vector<double> values, errors;
  std::vector<double> last_shell(windows.size()), prev_shell(windows.size());
  double total = 0.0;
  double error = 0.0;
  bool converged = false;

  for (;;) {
    for (const Panel& p : panels) {
      if (!p.evaluated) evals += p.paired() ? 42 : 21;
    }
    if (cfg.execution == Execution::parallel) {
      detail::evaluate_panels_parallel(panels, weighted);
    } else {
      detail::evaluate_panels_serial(panels, weighted);
    }

    values.clear();
    errors.clear();
    std::fill(last_shell.begin(), last_shell.end(), 0.0);
    std::fill(prev_shell.begin(), prev_shell.end(), 0.0);
    for (const Panel& p : panels) {
      values.push_back(p.value);
      errors.push_back(p.error);
      if (p.paired()) {
        const int last = windows[p.window].shells - 1;
        if (p.shell == last) last_shell[p.window] += p.value;
        if (p.shell == last - 1) prev_shell[p.window] += p.value;
      }
    }
    const double finite_eps = detail::pairwise_sum(values);
    // The paired integrand g(u) = f(p+u) + f(p-u) is even and smooth, so the
    // missing core [0, eps_K] is g(0) eps_K + O(eps^3) and the innermost shell
    // S_K estimates it: E_K = I(eps_K) + S_K. Successive estimates differ by
    // 2 S_K - S_{K-1}, which is the excision error charged to the budget.
    double extrapolation = 0.0;
    double previous_extrapolation = 0.0;
    double pv_error = 0.0;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      extrapolation += last_shell[w];
      previous_extrapolation += prev_shell[w] - last_shell[w];
      pv_error += std::abs(2.0 * last_shell[w] - prev_shell[w]);
    }
    total = finite_eps + extrapolation;
    error = detail::pairwise_sum(errors) + tail_error + pv_error;
    result.pv_last = total;
    result.pv_previous = finite_eps + previous_extrapolation;

    const double tol = std::max(cfg.rel_tol * std::abs(total), cfg.abs_tol);
    if (error <= tol) {
      converged = true;
      break;
    }
    if (result.subdivisions >= cfg.max_subdivisions) break;

    bool progressed = false;
    // Each window gets an equal share of a tenth of the budget.
    const double window_tol = 0.1 * tol / static_cast<double>(std::max<std::size_t>(windows.size(), 1));
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const double drift = std::abs(2.0 * last_shell[w] - prev_shell[w]);
      if (drift > window_tol && windows[w].shells < cfg.pv_max_halvings) {
        panels.push_back(shell_panel(windows[w], static_cast<int>(w), windows[w].shells));
        ++windows[w].shells;
        progressed = true;
      }
    }

    const double threshold = std::max(0.5 * tol / static_cast<double>(panels.size()), 0.0);
    double worst = 0.0;
    for (const Panel& p : panels) worst = std::max(worst, p.error);
    const std::size_t n = panels.size();
    for (std::size_t i = 0; i < n && result.subdivisions < cfg.max_subdivisions; ++i) {
      Panel& p = panels[i];
      if (!p.evaluated) continue;
      if (!(p.error > threshold || p.error >= worst)) continue;
      const double scale = std::max({std::abs(p.a), std::abs(p.b), p.paired() ? std::abs(p.pole) : 0.0});
      if (p.b - p.a <= kMinRelativeWidth * scale) continue;
      const double mid = 0.5 * (p.a + p.b);
      Panel right = p;
      right.a = mid;
      right.evaluated = false;
      right.depth = p.depth + 1;
      p.b = mid;
      p.evaluated = false;
      p.depth += 1;
      panels.push_back(right);
      ++result.subdivisions;
      progressed = true;
    }
    if (!progressed) break;
  }

  result.value = total;
  result.error_estimate = error;
  result.converged = converged;
  result.n_evals = evals;
  result.degraded_precision = at_cut.degraded ||
                              std::any_of(panels.begin(), panels.end(), [](const Panel& p) { return p.degraded; });
  double eps_min = 0.0;
  for (const Window& w : windows) {
    const double e = std::ldexp(w.eps0, -w.shells);
    eps_min = eps_min == 0.0 ? e : std::min(eps_min, e);
  }
  result.pv_epsilon = eps_min;
  return result;
}

}  // namespace

double bose_cutoff(double alpha, double tail_cut_weight) {
  return alpha / (2.0 * std::numbers::pi) * std::log(1.0 / tail_cut_weight);
}

double bose_weight(double x, double alpha) {
  const double s = 2.0 * std::numbers::pi * x / alpha;
  if (s > 700.0) return 0.0;
  return 1.0 / std::expm1(s);
}

QuadratureResult bose_integral(const Integrand& f, double alpha, std::span<const double> breakpoints,
                               const QuadratureConfig& config) {
  return integrate(f, alpha, {}, breakpoints, config);
}

QuadratureResult pv_bose_integral(const Integrand& f, double alpha, std::span<const double> poles,
                                  const QuadratureConfig& config, std::span<const double> breakpoints) {
  return integrate(f, alpha, poles, breakpoints, config);
}

}  // namespace casimir::quadrature
