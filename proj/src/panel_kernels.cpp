#include "casimir/detail/panel_kernels.hpp"

#include <algorithm>
#include <array>

namespace casimir::quadrature::detail {
namespace {

constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

}  // namespace

RuleResult gauss_kronrod21(const Integrand& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 10> lower{}, upper{};
  RuleResult out;

  const IntegrandValue fc = f(centre);
  out.degraded = fc.degraded;
  double kronrod = kKronrodWeights[10] * fc.value;
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const IntegrandValue f1 = f(centre - dx);
    const IntegrandValue f2 = f(centre + dx);
    out.degraded = out.degraded || f1.degraded || f2.degraded;
    lower[j] = f1.value;
    upper[j] = f2.value;
    const double pair = f1.value + f2.value;
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f1.value) + std::abs(f2.value));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(fc.value - mean);
  for (int j = 0; j < 10; ++j) {
    asc += kKronrodWeights[j] * (std::abs(lower[j] - mean) + std::abs(upper[j] - mean));
  }
  const double width = std::abs(half);
  out.value = kronrod * half;
  abs_sum *= width;
  asc *= width;
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * kEpsilon)) {
    err = std::max(50.0 * kEpsilon * abs_sum, err);
  }
  out.error = err;
  if (!std::isfinite(out.value) || !std::isfinite(out.error)) {
    out.value = 0.0;
    out.error = std::numeric_limits<double>::infinity();
  }
  return out;
}

void evaluate_panel(Panel& p, const Integrand& weighted) {
  RuleResult r;
  if (p.paired()) {
    const double pole = p.pole;
    const Integrand folded = [&weighted, pole](double u) {
      const IntegrandValue hi = weighted(pole + u);
      const IntegrandValue lo = weighted(pole - u);
      return IntegrandValue{hi.value + lo.value, hi.degraded || lo.degraded};
    };
    r = gauss_kronrod21(folded, p.a, p.b);
  } else {
    r = gauss_kronrod21(weighted, p.a, p.b);
  }
  p.value = r.value;
  p.error = r.error;
  p.degraded = r.degraded;
  p.evaluated = true;
}

void evaluate_panels_serial(std::span<Panel> panels, const Integrand& weighted) {
  for (Panel& p : panels) {
    if (!p.evaluated) evaluate_panel(p, weighted);
  }
}

void evaluate_panels_parallel(std::span<Panel> panels, const Integrand& weighted) {
  const long n = static_cast<long>(panels.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    if (!panels[i].evaluated) evaluate_panel(panels[i], weighted);
  }
}

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

}  // namespace casimir::quadrature::detail
