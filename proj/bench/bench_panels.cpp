// Serial reference vs OpenMP panel evaluation.
//   bench_panels [repeats=3]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "casimir/detail/panel_kernels.hpp"
#include "casimir/freeenergy.hpp"

using namespace casimir;
using quadrature::detail::Panel;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - start).count());
  }
  return best;
}

std::vector<Panel> make_panels(double x_max, int n) {
  std::vector<Panel> panels(n);
  for (int i = 0; i < n; ++i) {
    panels[i].a = x_max * i / n;
    panels[i].b = x_max * (i + 1) / n;
  }
  return panels;
}

bool same(const std::vector<Panel>& a, const std::vector<Panel>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a[i].value, &b[i].value, sizeof(double)) != 0) return false;
    if (std::memcmp(&a[i].error, &b[i].error, sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads available: %d\n\n", omp_get_max_threads());

  std::printf("%-28s %8s %10s %10s %8s %s\n", "panel sweep", "panels", "serial s", "omp s", "speedup", "bitwise");
  for (double lambda0 : {0.1, 1.0}) {
    for (double t : {0.1, 1.0}) {
      const double alpha = 2 * 3.141592653589793 * t;
      const quadrature::Integrand weighted = [&](double x) {
        const auto r = freeenergy::phase_sum(x, lambda0);
        return quadrature::IntegrandValue{r.value * quadrature::bose_weight(x, alpha), r.degraded};
      };
      const int n = 256;
      const double x_max = quadrature::bose_cutoff(alpha, 1e-36);
      std::vector<Panel> serial, parallel;
      const double ts = best_of(repeats, [&] {
        serial = make_panels(x_max, n);
        quadrature::detail::evaluate_panels_serial(serial, weighted);
      });
      const double tp = best_of(repeats, [&] {
        parallel = make_panels(x_max, n);
        quadrature::detail::evaluate_panels_parallel(parallel, weighted);
      });
      char label[64];
      std::snprintf(label, sizeof label, "lambda0=%g t=%g", lambda0, t);
      std::printf("%-28s %8d %10.4f %10.4f %8.2f %s\n", label, n, ts, tp, ts / tp, same(serial, parallel) ? "yes" : "NO");
    }
  }

  std::printf("\n%-28s %10s %10s %8s %s\n", "exact aF", "serial s", "omp s", "speedup", "bitwise");
  for (double lambda0 : {0.5, 2.0}) {
    for (double t : {0.05, 0.5, 5.0}) {
      ExactConfig s_cfg, p_cfg;
      s_cfg.quad.execution = quadrature::Execution::serial;
      p_cfg.quad.execution = quadrature::Execution::parallel;
      const ShellParams p(lambda0, t);
      double vs = 0, vp = 0;
      const double ts = best_of(repeats, [&] { vs = freeenergy::exact_aF(p, s_cfg).aF; });
      const double tp = best_of(repeats, [&] { vp = freeenergy::exact_aF(p, p_cfg).aF; });
      char label[64];
      std::snprintf(label, sizeof label, "lambda0=%g t=%g", lambda0, t);
      std::printf("%-28s %10.4f %10.4f %8.2f %s\n", label, ts, tp, ts / tp,
                  std::memcmp(&vs, &vp, sizeof vs) == 0 ? "yes" : "NO");
    }
  }
}
