#include "casimir/specfun.hpp"

#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "casimir/detail/ladders.hpp"

namespace casimir {

using boost::multiprecision::float128;

ModeIndex::ModeIndex(int l) : l_(l) {
  if (l < 1) throw std::invalid_argument("mode index l must be >= 1, got " + std::to_string(l));
}

RangeError::RangeError(const std::string& what, double x) : std::range_error(what), x_(x) {}

namespace specfun {
namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << name << ": argument must be finite and > 0, got " << x;
    throw std::domain_error(os.str());
  }
}

void require_order(int l, const char* name) {
  if (l < 0) throw std::domain_error(std::string(name) + ": order must be >= 0");
}

double finite_or_throw(double v, const char* name, double x) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << name << ": result not representable at x = " << x;
    throw RangeError(os.str(), x);
  }
  return v;
}

// sinh overflows double past this point.
constexpr double kMaxModifiedArgument = 709.0;

detail::ModifiedLadder<double> modified_ladder(int l, double x, const char* name) {
  require_order(l, name);
  require_positive(x, name);
  if (x > kMaxModifiedArgument) {
    std::ostringstream os;
    os << name << ": argument " << x << " overflows the modified Bessel ladder";
    throw RangeError(os.str(), x);
  }
  return detail::ModifiedLadder<double>(x, l);
}

// e^{x} e_l(x) and e^{x} e_l'(x) by upward recurrence; used where the full
// ladder would overflow through s_0 = sinh x. The decaying factor is applied last
// and may underflow to zero.
std::pair<double, double> decaying_e(int l, double x) {
  double prev = 1.0, cur = 1.0;  // e_{-1}, e_0
  for (int k = 0; k < l; ++k) {
    const double next = prev + (2.0 * k + 1.0) / x * cur;
    prev = cur;
    cur = next;
  }
  const double damp = std::exp(-x);
  return {damp * cur, damp * (-prev - (l / x) * cur)};
}

template <class Real>
ImagAxisPoint imag_axis_point(int l, Real x, Real lambda0, double bound) {
  using std::abs;
  detail::SphericalLadder<Real> ladder(x, l);
  const Real product = ladder.jy_product(l);
  const Real square = ladder.jj_product(l);
  const Real re = -x * x + lambda0 * product;
  const Real im = lambda0 * square;
  const Real scale = x * x + abs(lambda0 * product);
  const bool degraded = (lambda0 != 0 && ladder.dj_cancellation(l) < Real(bound)) ||
                        abs(re) < Real(bound) * scale;
  return {{static_cast<double>(re), static_cast<double>(im)}, degraded};
}

}  // namespace

double riccati_s(int l, double x) {
  return finite_or_throw(modified_ladder(l, x, "riccati_s").s(l).value(), "riccati_s", x);
}

double riccati_e(int l, double x) {
  if (x > kMaxModifiedArgument && l >= 0) return decaying_e(l, x).first;
  return modified_ladder(l, x, "riccati_e").e(l).value();
}

double riccati_s_prime(int l, double x) {
  return finite_or_throw(modified_ladder(l, x, "riccati_s_prime").s_prime(l).value(), "riccati_s_prime", x);
}

double riccati_e_prime(int l, double x) {
  if (x > kMaxModifiedArgument && l >= 0) return decaying_e(l, x).second;
  return finite_or_throw(modified_ladder(l, x, "riccati_e_prime").e_prime(l).value(), "riccati_e_prime", x);
}

double f_H(ModeIndex l, double x) {
  const auto ladder = modified_ladder(l.l(), x, "f_H");
  const auto ep = ladder.e_prime(l.l());
  const auto sp = ladder.s_prime(l.l());
  return finite_or_throw(std::ldexp(x * ep.mantissa * sp.mantissa, ep.exponent + sp.exponent), "f_H", x);
}

double calJ(ModeIndex l, double x) { return calJ_checked(l, x, 0.0).value; }

double calY(ModeIndex l, double x) {
  require_positive(x, "calY");
  detail::SphericalLadder<double> ladder(x, l.l());
  return -std::sqrt(2.0 * x / std::numbers::pi) * ladder.dy(l.l()).value();
}

Checked calJ_checked(ModeIndex l, double x, double cancellation_bound, Precision precision) {
  require_positive(x, "calJ");
  if (precision == Precision::extended) {
    detail::SphericalLadder<float128> ladder(float128(x), l.l());
    const float128 v = -sqrt(2 * float128(x) / boost::multiprecision::float128(std::numbers::pi)) *
                       ladder.dj(l.l()).value();
    return {static_cast<double>(v), ladder.dj_cancellation(l.l()) < float128(cancellation_bound) * 1e-17};
  }
  detail::SphericalLadder<double> ladder(x, l.l());
  const double v = -std::sqrt(2.0 * x / std::numbers::pi) * ladder.dj(l.l()).value();
  return {v, ladder.dj_cancellation(l.l()) < cancellation_bound};
}

ImagAxisPoint f_H_imag_axis(ModeIndex l, double x, double lambda0, Precision precision,
                            double cancellation_bound) {
  require_positive(x, "f_H_imag_axis");
  if (!(lambda0 >= 0.0)) throw std::domain_error("f_H_imag_axis: lambda0 must be >= 0");
  if (precision == Precision::extended) {
    return imag_axis_point<float128>(l.l(), float128(x), float128(lambda0), cancellation_bound * 1e-17);
  }
  return imag_axis_point<double>(l.l(), x, lambda0, cancellation_bound);
}

std::vector<SeriesTerm> f_H_series(ModeIndex mode, int max_power) {
  const double l = mode.l();
  std::vector<SeriesTerm> terms;
  if (max_power >= 0) terms.push_back({0, -l * (l + 1.0) / (2.0 * l + 1.0)});
  if (max_power >= 2) {
    terms.push_back({2, -(3.0 + 2.0 * l * (l + 1.0)) / ((4.0 * l * l - 1.0) * (2.0 * l + 3.0))});
  }
  const int odd = 2 * mode.l() + 1;
  if (max_power >= odd) {
    // -x^{2l+1} (-1)^l 2^{-2(l+1)} (l+1)^2 pi / Gamma(l+3/2)^2
    const double magnitude = std::exp(std::log(std::numbers::pi) + 2.0 * std::log(l + 1.0) -
                                      2.0 * (l + 1.0) * std::numbers::ln2 - 2.0 * std::lgamma(l + 1.5));
    terms.push_back({odd, (mode.l() % 2 == 0 ? -1.0 : 1.0) * magnitude});
  }
  return terms;
}

}  // namespace specfun
}  // namespace casimir
