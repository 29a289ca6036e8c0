#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "casimir/specfun.hpp"

namespace casimir::specfun {
namespace {

// B_{2j} / (2j)!
constexpr std::array<double, 7> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
};

constexpr int kDirectTerms = 50;

}  // namespace

// Re psi(1 + iy) = -gamma + sum_k y^2 / (k (k^2 + y^2)), with the tail k >= 50
// replaced by its Euler-Maclaurin expansion. The summand is 1/k - Re 1/(k + iy),
// whose derivatives are available in closed form.
double digamma_re_shifted(double xi) {
  if (!(xi > 0.0)) throw std::domain_error("digamma_re_shifted: xi must be > 0");
  if (std::isinf(xi)) return -std::numbers::egamma;
  const double y = 1.0 / xi;
  const double y2 = y * y;

  double sum = 0.0;
  for (int k = 1; k < kDirectTerms; ++k) {
    const double kd = k;
    sum += y2 / (kd * (kd * kd + y2));
  }

  const double n = kDirectTerms;
  double tail = 0.5 * std::log1p(y2 / (n * n));
  tail += 0.5 * y2 / (n * (n * n + y2));
  const std::complex<double> z(n, y);
  double factorial = 1.0;  // (2j-1)!
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const int m = 2 * static_cast<int>(j) + 1;
    if (j > 0) factorial *= static_cast<double>(m - 1) * static_cast<double>(m);
    // f^{(m)}(n) = (-1)^m m! [n^{-(m+1)} - Re (n+iy)^{-(m+1)}], m odd
    const double deriv = -factorial * (std::pow(n, -(m + 1)) - std::real(std::pow(z, -(m + 1))));
    tail -= kBernoulliOverFactorial[j] * deriv;
  }
  return -std::numbers::egamma + sum + tail;
}

}  // namespace casimir::specfun
