#include "casimir/freeenergy.hpp"

#include <boost/multiprecision/float128.hpp>

#include <atomic>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "casimir/detail/ladders.hpp"

namespace casimir {

using quadrature::IntegrandValue;
using quadrature::ModeSumConfig;
using quadrature::ModeSumResult;
using quadrature::QuadratureConfig;

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be finite and > 0, got " << v;
    throw std::domain_error(os.str());
  }
}

FreeEnergySample closed_form(const ShellParams& p, Method m, double aF) {
  return {p, m, aF, 0.0, 0, {}};
}

// Mode phases at one x, read off a recurrence ladder that grows on demand.
template <class Real>
class PhaseTerms {
 public:
  PhaseTerms(double x, double lambda0, PrecisionPolicy policy, int initial_lmax)
      : x_(x), lambda0_(lambda0), policy_(policy), ladder_(Real(x), initial_lmax) {}

  IntegrandValue operator()(int l) {
    using std::abs;
    if (l > ladder_.lmax()) ladder_ = detail::SphericalLadder<Real>(Real(x_), 2 * l);
    const Real product = ladder_.jy_product(l);
    const Real square = ladder_.jj_product(l);
    const Real re = -Real(x_) * Real(x_) + Real(lambda0_) * product;
    const Real im = Real(lambda0_) * square;
    const Real bound = Real(specfun::kDefaultCancellationBound) * Real(sizeof(Real) > sizeof(double) ? 1e-17 : 1.0);
    const bool degraded = (ladder_.dj_cancellation(l) < bound) ||
                          abs(re) < bound * (Real(x_) * Real(x_) + abs(Real(lambda0_) * product));
    if (degraded && policy_ == PrecisionPolicy::automatic && sizeof(Real) == sizeof(double)) {
      const ModePhaseTerm t = mode_phase(ModeIndex(l), x_, lambda0_, PrecisionPolicy::extended);
      return {t.value, t.degraded_precision};
    }
    if (re == 0 && im == 0) return {0.0, true};
    return {arg_branch({static_cast<double>(re), static_cast<double>(im)}), degraded};
  }

 private:
  double x_;
  double lambda0_;
  PrecisionPolicy policy_;
  detail::SphericalLadder<Real> ladder_;
};

double log_sinh_over_x(double a) {
  if (a < 0.5) {
    // sinh(a)/a - 1 = sum_{k>=1} a^{2k} / (2k+1)!
    const double a2 = a * a;
    double term = a2 / 6.0;
    double sum = 0.0;
    for (int k = 1; k < 30 && term > 1e-20 * (sum + term); ++k) {
      sum += term;
      term *= a2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    return std::log1p(sum);
  }
  if (a < 20.0) return std::log(std::sinh(a) / a);
  return a - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * a)) - std::log(a);
}

}  // namespace

ShellParams::ShellParams(double lambda0, double t) : lambda0_(lambda0), t_(t) {
  require_positive(lambda0, "lambda0");
  require_positive(t, "t");
}

ShellParams ShellParams::from_alpha_xi(double alpha, double xi) {
  require_positive(alpha, "alpha");
  require_positive(xi, "xi");
  return ShellParams(1.5 * alpha * alpha / (xi * xi), alpha / (2.0 * kPi));
}

double ShellParams::alpha() const noexcept { return 2.0 * kPi * t_; }

double ShellParams::xi() const noexcept { return alpha() * std::sqrt(3.0 / (2.0 * lambda0_)); }

std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::weak1: return "weak1";
    case Method::lowT_closed: return "lowT_closed";
    case Method::lowT_integral: return "lowT_integral";
    case Method::strong_lowT: return "strong_lowT";
    case Method::weak_lowT: return "weak_lowT";
    case Method::highT: return "highT";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::exact, Method::weak1, Method::lowT_closed, Method::lowT_integral, Method::strong_lowT,
                   Method::weak_lowT, Method::highT}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string SampleFlags::describe() const {
  if (ok()) return "ok";
  std::string s;
  if (!converged) s = "unconverged";
  if (degraded) s += s.empty() ? "degraded" : "|degraded";
  return s;
}

namespace freeenergy {

ModeSumResult phase_sum(double x, double lambda0, const ModeSumConfig& modes, PrecisionPolicy precision) {
  if (lambda0 == 0.0) {
    ModeSumResult zero;
    zero.converged = true;
    zero.l_floor = quadrature::mode_sum_floor(x, modes);
    zero.l_max = zero.l_floor;
    return zero;
  }
  const int initial = quadrature::mode_sum_floor(x, modes) + 16;
  if (precision == PrecisionPolicy::extended) {
    PhaseTerms<boost::multiprecision::float128> terms(x, lambda0, precision, initial);
    return quadrature::mode_sum(std::ref(terms), x, modes);
  }
  PhaseTerms<double> terms(x, lambda0, precision, initial);
  return quadrature::mode_sum(std::ref(terms), x, modes);
}

FreeEnergySample exact_aF(const ShellParams& p, const ExactConfig& config) {
  const double lambda0 = p.lambda0();
  const double alpha = p.alpha();

  QuadratureConfig quad = config.quad;
  // The l = 1 phase oscillates for x > nu = 3/2; no panel spans more than half
  // an oscillation quasi-period.
  quad.forced_spacing = kPi / 2.0;
  quad.forced_from = 1.5;
  double x_max = quadrature::bose_cutoff(alpha, quad.tail_cut_weight);
  if (x_max > quad.forced_from) {
    x_max = quad.forced_from + std::ceil((x_max - quad.forced_from) / quad.forced_spacing) * quad.forced_spacing;
  }

  const PhaseSingularities sing = collect_singularities(lambda0, x_max, config.feature_floor);

  std::atomic<int> l_max{0};
  std::atomic<bool> sums_converged{true};
  const quadrature::Integrand integrand = [&](double x) {
    const ModeSumResult r = phase_sum(x, lambda0, config.modes, config.precision);
    int seen = l_max.load(std::memory_order_relaxed);
    while (r.l_max > seen && !l_max.compare_exchange_weak(seen, r.l_max, std::memory_order_relaxed)) {
    }
    if (!r.converged) sums_converged.store(false, std::memory_order_relaxed);
    return IntegrandValue{r.value, r.degraded};
  };

  const quadrature::QuadratureResult q =
      quadrature::pv_bose_integral(integrand, alpha, sing.pv_points, quad, sing.breakpoints);

  FreeEnergySample s{p, Method::exact, -q.value / kPi, q.error_estimate / kPi, l_max.load(), {}};
  s.flags.converged = q.converged && sums_converged.load();
  s.flags.degraded = q.degraded_precision;
  return s;
}

FreeEnergySample weak1_aF(const ShellParams& p) {
  const double a = p.alpha();
  return closed_form(p, Method::weak1, p.lambda0() / (4.0 * kPi) * (log_sinh_over_x(a) + a * a / 18.0));
}

double lowT_closed_bracket(double xi) {
  require_positive(xi, "xi");
  return xi * xi / 12.0 - std::log(xi) - specfun::digamma_re_shifted(xi);
}

FreeEnergySample lowT_closed_aF(const ShellParams& p) {
  const double c = 2.0 * p.lambda0() / 3.0;
  return closed_form(p, Method::lowT_closed, c * c / kPi * lowT_closed_bracket(p.xi()));
}

LowTIntegral lowT_integral_bracket(double alpha, double xi, LowTForm form, const QuadratureConfig& config) {
  require_positive(alpha, "alpha");
  require_positive(xi, "xi");
  const double pole[] = {1.0};
  LowTIntegral out;
  if (form == LowTForm::arctan) {
    const double r = alpha / xi;
    const double c = (2.0 / 3.0) * r * r * r;
    const quadrature::Integrand f = [c](double z) {
      return IntegrandValue{std::atan(c * z * z * z / (1.0 - z * z)), false};
    };
    out.quad = quadrature::pv_bose_integral(f, xi, pole, config);
    // -(3 xi^3 / alpha^3) = -2 / c
    out.bracket = -2.0 / c * out.quad.value;
    out.quad.error_estimate *= 2.0 / c;
  } else {
    const quadrature::Integrand f = [](double z) { return IntegrandValue{z * z * z / (1.0 - z * z), false}; };
    out.quad = quadrature::pv_bose_integral(f, xi, pole, config);
    out.bracket = -2.0 * out.quad.value;
    out.quad.error_estimate *= 2.0;
  }
  return out;
}

FreeEnergySample lowT_integral_aF(const ShellParams& p, LowTForm form, const QuadratureConfig& config) {
  const LowTIntegral r = lowT_integral_bracket(p.alpha(), p.xi(), form, config);
  const double c = 2.0 * p.lambda0() / 3.0;
  const double scale = c * c / kPi;
  FreeEnergySample s{p, Method::lowT_integral, scale * r.bracket, scale * r.quad.error_estimate, 0, {}};
  s.flags.converged = r.quad.converged;
  s.flags.degraded = r.quad.degraded_precision;
  return s;
}

double strong_lowT_value(double t) { return -(2.0 / 15.0) * kPi * kPi * kPi * t * t * t * t; }

FreeEnergySample strong_lowT_aF(const ShellParams& p) {
  return closed_form(p, Method::strong_lowT, strong_lowT_value(p.t()));
}

FreeEnergySample weak_lowT_aF(const ShellParams& p) {
  return closed_form(p, Method::weak_lowT, (2.0 / 9.0) * p.lambda0() * kPi * p.t() * p.t());
}

FreeEnergySample highT_aF(const ShellParams& p) {
  return closed_form(p, Method::highT, p.lambda0() * kPi * p.t() * p.t() / 18.0);
}

double highT_aS(const ShellParams& p) { return -p.lambda0() * p.alpha() / 18.0; }

LogSeries lowT_log_series(double lambda0) {
  require_positive(lambda0, "lambda0");
  return {std::log(2.0 * lambda0 / 3.0), 3.0 / (2.0 * lambda0) + 0.7, -2.0 / 3.0};
}

FreeEnergySample evaluate(const ShellParams& p, Method method, const EvalConfig& config) {
  switch (method) {
    case Method::exact: return exact_aF(p, config.exact);
    case Method::weak1: return weak1_aF(p);
    case Method::lowT_closed: return lowT_closed_aF(p);
    case Method::lowT_integral: return lowT_integral_aF(p, config.lowT_form, config.exact.quad);
    case Method::strong_lowT: return strong_lowT_aF(p);
    case Method::weak_lowT: return weak_lowT_aF(p);
    case Method::highT: return highT_aF(p);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace freeenergy
}  // namespace casimir
