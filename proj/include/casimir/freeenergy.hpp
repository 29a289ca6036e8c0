#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "casimir/phase.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Dimensionless inputs: coupling lambda0 and temperature t = aT.
/// Derived: alpha = 2 pi t and xi = alpha sqrt(3 / (2 lambda0)).
class ShellParams {
 public:
  ShellParams(double lambda0, double t);

  /// Parameters reproducing a given (alpha, xi) pair: t = alpha/(2 pi), lambda0 = 3 alpha^2 / (2 xi^2).
  static ShellParams from_alpha_xi(double alpha, double xi);

  double lambda0() const noexcept { return lambda0_; }
  double t() const noexcept { return t_; }
  double alpha() const noexcept;
  double xi() const noexcept;

  ShellParams with_t(double t) const { return ShellParams(lambda0_, t); }

 private:
  double lambda0_;
  double t_;
};

enum class Method { exact, weak1, lowT_closed, lowT_integral, strong_lowT, weak_lowT, highT };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct SampleFlags {
  bool converged = true;
  bool degraded = false;

  bool ok() const { return converged && !degraded; }
  std::string describe() const;
};

struct FreeEnergySample {
  ShellParams params;
  Method method;
  double aF = 0.0;
  double error_estimate = 0.0;
  int l_max = 0;  // exact only
  SampleFlags flags;
};

struct EntropySample {
  ShellParams params;
  Method method;
  double aS = 0.0;
  double stencil_h = 0.0;
  double error_estimate = 0.0;
  SampleFlags flags;
};

enum class LowTForm { arctan, linearized };

struct ExactConfig {
  quadrature::QuadratureConfig quad;
  quadrature::ModeSumConfig modes;
  PrecisionPolicy precision = PrecisionPolicy::automatic;
  // Zeros whose phase jump is narrower than this (relative) are not excised.
  double feature_floor = 1e-20;
};

struct EvalConfig {
  ExactConfig exact;
  LowTForm lowT_form = LowTForm::arctan;
};

namespace freeenergy {

/// sum_{l>=1} (2l+1) arg[-x^2 - lambda0 f_H(l, ix)] at one frequency x.
quadrature::ModeSumResult phase_sum(double x, double lambda0, const quadrature::ModeSumConfig& modes = {},
                                    PrecisionPolicy precision = PrecisionPolicy::automatic);

/// Temperature-dependent TM free energy from the Abel-Plana form,
/// a dF = -(1/pi) int_0^inf dx (e^{2 pi x/alpha} - 1)^{-1} sum_l (2l+1) arg[...].
FreeEnergySample exact_aF(const ShellParams& p, const ExactConfig& config = {});

/// Order-lambda0 result (lambda0 / 4pi) [ln(sinh alpha / alpha) + alpha^2 / 18].
FreeEnergySample weak1_aF(const ShellParams& p);

/// xi^2/12 - ln xi - Re psi(1 + i/xi)
double lowT_closed_bracket(double xi);

/// (2 lambda0/3)^2 (1/pi) [xi^2/12 - ln xi - Re psi(1 + i/xi)]
FreeEnergySample lowT_closed_aF(const ShellParams& p);

/// The same bracket from the real-frequency low-temperature integral, either
/// with the arctangent kept or linearized; both take a principal value at z = 1.
struct LowTIntegral {
  double bracket = 0.0;
  quadrature::QuadratureResult quad;
};
LowTIntegral lowT_integral_bracket(double alpha, double xi, LowTForm form,
                                   const quadrature::QuadratureConfig& config = {});
FreeEnergySample lowT_integral_aF(const ShellParams& p, LowTForm form,
                                  const quadrature::QuadratureConfig& config = {});

/// -(2/15) pi^3 t^4
FreeEnergySample strong_lowT_aF(const ShellParams& p);
double strong_lowT_value(double t);

/// (2/9) lambda0 pi t^2
FreeEnergySample weak_lowT_aF(const ShellParams& p);

/// lambda0 pi t^2 / 18 and its entropy -lambda0 alpha / 18
FreeEnergySample highT_aF(const ShellParams& p);
double highT_aS(const ShellParams& p);

/// Coefficients of x^0, x^2, x^3 in ln[x^2 - lambda0 f_H(1, x)].
struct LogSeries {
  double c0 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};
LogSeries lowT_log_series(double lambda0);

FreeEnergySample evaluate(const ShellParams& p, Method method, const EvalConfig& config = {});

/// Default stencil: max(1e-3, t/20), shrunk to t/4 when the stencil would reach t <= 0.
double default_stencil(double t);

/// aS = -d(aF)/dt from five-point central differences at h and h/2 combined by
/// Richardson extrapolation.
EntropySample entropy(const ShellParams& p, Method method, std::optional<double> stencil_h = std::nullopt,
                      const EvalConfig& config = {});

}  // namespace freeenergy
}  // namespace casimir
