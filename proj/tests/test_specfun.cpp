#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "casimir/specfun.hpp"
#include "oracle/bessel_oracle.hpp"

using namespace casimir;
using namespace casimir::specfun;
using oracle::Big;

namespace {

double rel(double got, const Big& want) {
  const double w = static_cast<double>(want);
  return std::abs(got - w) / std::abs(w);
}

// Residual of a truncated series at x, for a log-log slope fit.
template <class F>
double slope(F residual, double x1, double x2) {
  return std::log(std::abs(residual(x2)) / std::abs(residual(x1))) / std::log(x2 / x1);
}

}  // namespace

TEST_CASE("elementary seeds") {
  CHECK(riccati_s(0, 1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
  CHECK(riccati_e(0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(riccati_e(1, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(riccati_s_prime(0, 1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(riccati_e_prime(0, 1.0) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));
  for (double x : {1e-2, 1e-4, 1e-6}) CHECK(riccati_s(1, x) / (x * x / 3.0) == doctest::Approx(1.0).epsilon(x * x));
}

TEST_CASE("domain and range errors") {
  CHECK_THROWS_AS(riccati_e(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(riccati_s(1, -1.0), std::domain_error);
  CHECK_THROWS_AS(ModeIndex(0), std::invalid_argument);
  try {
    (void)riccati_s(2, 800.0);
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(e.argument() == 800.0);
  }
  CHECK(riccati_e(3, 800.0) == 0.0);
  CHECK(riccati_e(0, 710.0) == doctest::Approx(std::exp(-710.0)).epsilon(1e-14));
  CHECK(riccati_e_prime(0, 710.0) == doctest::Approx(-std::exp(-710.0)).epsilon(1e-14));
}

TEST_CASE("oracle grid: l <= 60, x in [1e-3, 50]") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> pick_l(1, 60);
  std::uniform_real_distribution<double> pick_logx(std::log(1e-3), std::log(50.0));
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int l = (i < 10) ? i : pick_l(rng);
    const double x = std::exp(pick_logx(rng));
    const Big bx(x);
    CAPTURE(l);
    CAPTURE(x);
    double r = std::max({rel(riccati_s(l, x), oracle::s(l, bx)), rel(riccati_e(l, x), oracle::e(l, bx)),
                         rel(riccati_s_prime(l, x), oracle::s_prime(l, bx)),
                         rel(riccati_e_prime(l, x), oracle::e_prime(l, bx))});
    if (l >= 1) {
      // calJ and calY oscillate; errors are measured against the local envelope.
      const Big J = oracle::calJ(l, bx), Y = oracle::calY(l, bx);
      const double env = static_cast<double>(sqrt(J * J + Y * Y));
      r = std::max(r, std::abs(calJ(ModeIndex(l), x) - static_cast<double>(J)) / env);
      r = std::max(r, std::abs(calY(ModeIndex(l), x) - static_cast<double>(Y)) / env);
      r = std::max(r, rel(f_H(ModeIndex(l), x), oracle::f_H(l, bx)));
    }
    CHECK(r < 1e-10);
    worst = std::max(worst, r);
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("Wronskian s e' - s' e = -1") {
  for (int l = 0; l <= 60; ++l) {
    for (int i = 0; i <= 40; ++i) {
      const double x = 1e-3 * std::pow(5e4, i / 40.0);
      const double w = riccati_s(l, x) * riccati_e_prime(l, x) - riccati_s_prime(l, x) * riccati_e(l, x);
      CAPTURE(l);
      CAPTURE(x);
      CHECK(std::abs(w + 1.0) < 1e-12);
    }
  }
}

TEST_CASE("calJ closed forms") {
  CHECK(calJ(ModeIndex(1), std::numbers::pi) == doctest::Approx(std::sqrt(2.0) / std::numbers::pi).epsilon(1e-14));
  // [x j_1]' = sin x - sin x / x^2 + cos x / x, so calJ ~ x^{3/2} near 0
  for (double x : {0.3, 2.0, 7.5, 20.0}) {
    const double dj = std::sin(x) - std::sin(x) / (x * x) + std::cos(x) / x;
    const double want = -std::sqrt(2.0 * x / std::numbers::pi) * dj;
    CHECK(std::abs(calJ(ModeIndex(1), x) - want) <= 1e-10 * std::sqrt(2.0 * x / std::numbers::pi));
  }
  const double a = calJ(ModeIndex(1), 1e-4), b = calJ(ModeIndex(1), 2e-4);
  CHECK(std::log(b / a) / std::log(2.0) == doctest::Approx(1.5).epsilon(1e-6));
  // l = 2 and 3 through the spherical closed forms
  for (double x : {0.05, 0.7, 3.0, 11.0}) {
    const double s = std::sin(x), c = std::cos(x);
    const double j1 = s / (x * x) - c / x;
    const double j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
    const double j3 = (15.0 / (x * x * x) - 6.0 / x) * s / x - (15.0 / (x * x) - 1.0) * c / x;
    const double pref = -std::sqrt(2.0 * x / std::numbers::pi);
    const double env = std::sqrt(2.0 * x / std::numbers::pi) * std::max(1.0, 1.0 / x);
    CHECK(std::abs(calJ(ModeIndex(2), x) - pref * (x * j1 - 2.0 * j2)) <= 1e-10 * env);
    CHECK(std::abs(calJ(ModeIndex(3), x) - pref * (x * j2 - 3.0 * j3)) <= 1e-10 * env);
  }
}

TEST_CASE("calJ cancellation sentinel") {
  const Checked ok = calJ_checked(ModeIndex(1), 1.0);
  CHECK_FALSE(ok.degraded);
  // [x j_1]' vanishes near x = 2.7437; right on top of the zero the recurrence cancels.
  double lo = 2.5, hi = 3.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (calJ(ModeIndex(1), lo) * calJ(ModeIndex(1), mid) <= 0 ? hi : lo) = mid;
  }
  CHECK(calJ_checked(ModeIndex(1), lo).degraded);
  const Checked wide = calJ_checked(ModeIndex(1), lo, kDefaultCancellationBound, Precision::extended);
  CHECK(std::abs(wide.value) < 1e-12);
}

TEST_CASE("f_H values") {
  CHECK(std::abs(f_H(ModeIndex(1), 1e-3) + 2.0 / 3.0) < 1e-6);
  const double x = 0.1;
  const double series = -2.0 / 3.0 - (7.0 / 15.0) * x * x + (4.0 / 9.0) * x * x * x;
  CHECK(std::abs(f_H(ModeIndex(1), x) - series) < 1e-4);
  CHECK(f_H(ModeIndex(40), 1.0) / -20.25 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("imaginary-axis point") {
  for (double x : {0.1, 1.0, 9.0}) {
    const ImagAxisPoint p = f_H_imag_axis(ModeIndex(3), x, 0.0);
    CHECK(p.point.re == -x * x);
    CHECK(p.point.im == 0.0);
  }
  const Big bx("0.3");
  const Big J = oracle::calJ(1, bx), Y = oracle::calY(1, bx);
  const Big half_pi = oracle::big_pi() / 2;
  const ImagAxisPoint p = f_H_imag_axis(ModeIndex(1), 0.3, 1.0);
  CHECK(rel(p.point.re, -bx * bx + half_pi * J * Y) < 1e-12);
  CHECK(rel(p.point.im, half_pi * J * J) < 1e-12);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick_l(1, 40);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long negative = 0;
  for (int i = 0; i < 1000000; ++i) {
    const int l = pick_l(rng);
    const double xx = 1e-3 + 30.0 * u(rng);
    const double lam = 1e-4 + 10.0 * u(rng);
    if (f_H_imag_axis(ModeIndex(l), xx, lam).point.im < 0.0) ++negative;
  }
  CHECK(negative == 0);
}

TEST_CASE("small-x series coefficients") {
  const auto s1 = f_H_series(ModeIndex(1), 3);
  REQUIRE(s1.size() == 3);
  CHECK(s1[0].power == 0);
  CHECK(s1[0].coefficient == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(s1[1].power == 2);
  CHECK(s1[1].coefficient == doctest::Approx(-7.0 / 15.0).epsilon(1e-15));
  CHECK(s1[2].power == 3);
  CHECK(s1[2].coefficient == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  // -(-1)^1 2^-4 4 pi / Gamma(5/2)^2 with Gamma(5/2) = 3 sqrt(pi)/4
  const double g = 3.0 * std::sqrt(std::numbers::pi) / 4.0;
  CHECK(s1[2].coefficient == doctest::Approx(std::pow(2.0, -4) * 4.0 * std::numbers::pi / (g * g)).epsilon(1e-14));
  CHECK(f_H_series(ModeIndex(2), 0)[0].coefficient == doctest::Approx(-6.0 / 5.0).epsilon(1e-15));
  CHECK(f_H_series(ModeIndex(2), 5).back().power == 5);
}

TEST_CASE("series truncation error has the next order") {
  for (int l = 1; l <= 3; ++l) {
    const auto terms = f_H_series(ModeIndex(l), 3);
    auto residual = [&](double x) {
      double s = 0.0;
      for (const SeriesTerm& t : terms) s += t.coefficient * std::pow(x, t.power);
      return f_H(ModeIndex(l), x) - s;
    };
    CAPTURE(l);
    CHECK(slope(residual, 0.01, 0.02) == doctest::Approx(4.0).epsilon(0.03));
  }
}

TEST_CASE("large-l limit approaches -nu/2 monotonically") {
  for (double x : {0.5, 1.0, 2.5, 5.0}) {
    double prev_real = 1e300, prev_imag = 1e300;
    for (int l = static_cast<int>(2 * x) + 2; l <= 150; ++l) {
      const double nu = l + 0.5;
      const double dev_real = std::abs(f_H(ModeIndex(l), x) / (-nu / 2) - 1.0);
      // Re f_H(l, ix) = -(pi/2) calJ calY = -(re + x^2) at unit coupling
      const double on_axis = -(f_H_imag_axis(ModeIndex(l), x, 1.0).point.re + x * x);
      const double dev_imag = std::abs(on_axis / (-nu / 2) - 1.0);
      CAPTURE(x);
      CAPTURE(l);
      CHECK(dev_real < prev_real);
      CHECK(dev_imag < prev_imag);
      prev_real = dev_real;
      prev_imag = dev_imag;
    }
    CHECK(prev_real < 1e-2);
  }
}

TEST_CASE("digamma real part") {
  for (double xi : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    CAPTURE(xi);
    CHECK(std::abs(digamma_re_shifted(xi) - oracle::digamma_re_series(xi)) < 1e-10);
  }
  CHECK(digamma_re_shifted(1.0) == doctest::Approx(0.0946503).epsilon(1e-6));
  CHECK(digamma_re_shifted(1e9) == doctest::Approx(-0.57721566490153286).epsilon(1e-15));
}
