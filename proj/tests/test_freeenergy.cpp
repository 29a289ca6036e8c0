#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "casimir/freeenergy.hpp"
#include "oracle/bessel_oracle.hpp"

using namespace casimir;
using namespace casimir::freeenergy;
constexpr double kPi = std::numbers::pi;

namespace {

// Direct evaluation of the Abel-Plana integral: Boost spherical Bessel functions,
// a fixed l_max, roots of the real part from a fine sign scan, and adaptive
// Gauss-Kronrod between consecutive roots.
struct BruteForce {
  double lambda0;
  int l_max;

  double term(int l, double x) const {
    using boost::math::sph_bessel;
    using boost::math::sph_neumann;
    const double dj = x * sph_bessel(l - 1, x) - l * sph_bessel(l, x);
    const double im = lambda0 * x * dj * dj;
    if (im == 0.0) return 0.0;
    const double dy = x * sph_neumann(l - 1, x) - l * sph_neumann(l, x);
    const double re = -x * x + lambda0 * x * dj * dy;
    if (!std::isfinite(re)) return 0.0;
    return re == 0.0 ? kPi / 2 : std::atan(im / re);
  }

  double phase_sum(double x) const {
    double s = 0.0;
    for (int l = 1; l <= l_max; ++l) s += (2 * l + 1) * term(l, x);
    return s;
  }

  double re(int l, double x) const {
    using boost::math::sph_bessel;
    using boost::math::sph_neumann;
    const double dj = x * sph_bessel(l - 1, x) - l * sph_bessel(l, x);
    const double dy = x * sph_neumann(l - 1, x) - l * sph_neumann(l, x);
    return -x * x + lambda0 * x * dj * dy;
  }

  std::vector<double> roots(double x_max) const {
    std::vector<double> out;
    for (int l = 1; l <= 40; ++l) {
      double prev_x = 1e-4, prev = re(l, prev_x);
      for (double x = 1e-4; x < x_max;) {
        x = std::min(x_max, x < 1 ? x * 1.002 : x + 2e-3);
        const double cur = re(l, x);
        if ((cur > 0) != (prev > 0) && std::isfinite(cur) && std::isfinite(prev)) {
          double a = prev_x, b = x;
          for (int i = 0; i < 80; ++i) {
            const double m = 0.5 * (a + b);
            ((re(l, m) > 0) == (prev > 0) ? a : b) = m;
          }
          out.push_back(0.5 * (a + b));
        }
        prev = cur;
        prev_x = x;
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  double aF(double t) const {
    const double alpha = 2 * kPi * t;
    const double x_max = alpha / (2 * kPi) * std::log(1e20);
    std::vector<double> edges{0.0};
    for (double r : roots(x_max)) edges.push_back(r);
    for (double x = 0.25; x < x_max; x += 0.25) edges.push_back(x);
    edges.push_back(x_max);
    std::sort(edges.begin(), edges.end());
    auto f = [&](double x) { return x == 0.0 ? 0.0 : phase_sum(x) / std::expm1(2 * kPi * x / alpha); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      if (edges[i + 1] - edges[i] < 1e-15) continue;
      total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, edges[i], edges[i + 1], 8, 1e-11);
    }
    return -total / kPi;
  }
};

}  // namespace

TEST_CASE("shell parameters") {
  const ShellParams p(0.7, 0.3);
  CHECK(p.alpha() == 2 * kPi * 0.3);
  CHECK(p.xi() * p.xi() == doctest::Approx(3 * p.alpha() * p.alpha() / (2 * 0.7)).epsilon(1e-15));
  const ShellParams q = ShellParams::from_alpha_xi(p.alpha(), p.xi());
  CHECK(q.lambda0() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(q.t() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(ShellParams(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(ShellParams(1.0, -1.0), std::domain_error);
  CHECK(parse_method("lowT_integral") == Method::lowT_integral);
  CHECK_FALSE(parse_method("nope").has_value());
}

TEST_CASE("exact free energy vanishes with the coupling") {
  const auto s = exact_aF(ShellParams(1e-10, 0.3));
  CHECK(std::abs(s.aF) < 1e-10);
  CHECK(s.flags.ok());
  CHECK(s.error_estimate >= 0.0);
}

TEST_CASE("exact free energy against a brute-force evaluation") {
  const BruteForce oracle{1.0, 300};
  const double want = oracle.aF(0.5);
  const auto got = exact_aF(ShellParams(1.0, 0.5));
  MESSAGE("brute force " << want << "  adaptive " << got.aF);
  CHECK(got.flags.ok());
  CHECK(got.aF == doctest::Approx(want).epsilon(1e-6));
  // weak coupling, low t: where the order-lambda0 form is off by 5-16%
  for (double t : {0.05, 0.1}) {
    const double w = BruteForce{1e-3, 300}.aF(t);
    const auto g = exact_aF(ShellParams(1e-3, t));
    CAPTURE(t);
    CHECK(g.aF == doctest::Approx(w).epsilon(1e-6));
  }
}

TEST_CASE("order-lambda0 closed form") {
  const auto w = weak1_aF(ShellParams::from_alpha_xi(1.0, std::sqrt(1.5)));  // lambda0 = 1, alpha = 1
  CHECK(w.params.lambda0() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.aF == doctest::Approx((std::log(std::sinh(1.0)) + 1.0 / 18) / (4 * kPi)).epsilon(1e-14));
  CHECK(w.aF == doctest::Approx(0.0172663).epsilon(1e-3));
  // no overflow for huge alpha
  const auto big = weak1_aF(ShellParams(1.0, 500.0));
  CHECK(std::isfinite(big.aF));
  const double a = 1000.0 * kPi;
  CHECK(big.aF / highT_aF(ShellParams(1.0, 500.0)).aF ==
        doctest::Approx(1.0 + 18.0 * (a - std::log(2.0 * a)) / (a * a)).epsilon(1e-12));
}

TEST_CASE("order-lambda0 limits reproduce the low- and high-T coefficients") {
  // small alpha: relative residual against (2/9) lambda0 pi t^2 falls as alpha^2
  auto low = [](double t) {
    const ShellParams p(0.3, t);
    return weak1_aF(p).aF / weak_lowT_aF(p).aF - 1.0;
  };
  CHECK(std::abs(low(1e-6)) < 1e-10);
  CHECK(low(1e-3) / low(5e-4) == doctest::Approx(4.0).epsilon(1e-3));
  // large alpha: (weak1 - highT) / (lambda0/4pi) -> ln(sinh a / a) = a - ln 2 - ln a + o(1)
  for (double t : {50.0, 200.0}) {
    const ShellParams p(0.3, t);
    const double a = p.alpha();
    const double diff = (weak1_aF(p).aF - highT_aF(p).aF) * 4 * kPi / 0.3;
    CHECK(diff == doctest::Approx(a - std::log(2.0) - std::log(a)).epsilon(1e-12));
  }
}

TEST_CASE("low-temperature closed form") {
  const double bracket = lowT_closed_bracket(1.0);
  CHECK(std::abs(bracket - (1.0 / 12 - oracle::digamma_re_series(1.0))) < 1e-10);
  CHECK(bracket == doctest::Approx(-0.0113170).epsilon(1e-4));
  // large xi recovers the weak-coupling low-T law
  const ShellParams weak(1e-8, 0.1);
  CHECK(lowT_closed_aF(weak).aF / weak_lowT_aF(weak).aF == doctest::Approx(1.0).epsilon(1e-3));
  // small xi recovers the strong-coupling law
  const ShellParams strong = ShellParams::from_alpha_xi(0.01, 0.05);
  CHECK(lowT_closed_aF(strong).aF / strong_lowT_aF(strong).aF == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("low-temperature integral forms") {
  const auto lin = lowT_integral_bracket(0.05, 1.0, LowTForm::linearized);
  CHECK(lin.quad.converged);
  CHECK(lin.bracket == doctest::Approx(lowT_closed_bracket(1.0)).epsilon(1e-8));
  const ShellParams p = ShellParams::from_alpha_xi(0.05, 1.0);
  const double c = 2 * p.lambda0() / 3;
  CHECK(lowT_integral_aF(p, LowTForm::linearized).aF == doctest::Approx(-c * c * 2 / kPi * 0.0056585).epsilon(1e-4));
  const auto arc = lowT_integral_bracket(0.01, 2.0, LowTForm::arctan);
  const auto lin2 = lowT_integral_bracket(0.01, 2.0, LowTForm::linearized);
  CHECK(arc.bracket == doctest::Approx(lin2.bracket).epsilon(1e-3));
  for (double alpha : {0.1, 0.01}) {
    for (double xi : {0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0}) {
      CAPTURE(alpha);
      CAPTURE(xi);
      const double closed = lowT_closed_bracket(xi);
      CHECK(lowT_integral_bracket(alpha, xi, LowTForm::arctan).bracket == doctest::Approx(closed).epsilon(0.01));
      CHECK(lowT_integral_bracket(alpha, xi, LowTForm::linearized).bracket == doctest::Approx(closed).epsilon(0.01));
    }
  }
}

TEST_CASE("limiting laws") {
  CHECK(strong_lowT_value(0.01) == doctest::Approx(-4.1342e-8).epsilon(1e-4));
  CHECK(strong_lowT_value(0.0) == 0.0);
  CHECK(weak_lowT_aF(ShellParams(1e-4, 0.1)).aF == doctest::Approx(6.9813e-7).epsilon(1e-4));
  const ShellParams hot(0.5, 5.0);
  CHECK(highT_aF(hot).aF == doctest::Approx(2.1817).epsilon(1e-4));
  CHECK(highT_aS(hot) == doctest::Approx(-0.87266).epsilon(1e-4));
}

TEST_CASE("log series of the l = 1 denominator") {
  const LogSeries s = lowT_log_series(1.5);
  CHECK(std::abs(s.c0) < 1e-15);
  CHECK(s.c2 == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(s.c3 == doctest::Approx(-2.0 / 3).epsilon(1e-15));
  const LogSeries u = lowT_log_series(1.0);
  auto residual = [&](double x) {
    const double exact = std::log(x * x - specfun::f_H(ModeIndex(1), x));
    return exact - (u.c0 + u.c2 * x * x + u.c3 * x * x * x);
  };
  const double slope = std::log(std::abs(residual(0.02) / residual(0.01))) / std::log(2.0);
  CHECK(slope == doctest::Approx(4.0).epsilon(0.03));
}

TEST_CASE("entropy by differentiation") {
  const auto strong = entropy(ShellParams(2.0, 0.01), Method::strong_lowT);
  CHECK(strong.aS == doctest::Approx(8.0 / 15 * std::pow(kPi, 3) * 1e-6).epsilon(1e-4));
  const auto weak = entropy(ShellParams(1e-4, 0.08), Method::weak_lowT);
  CHECK(weak.aS == doctest::Approx(-4.0 / 9 * 1e-4 * kPi * 0.08).epsilon(1e-4));
  const auto hot = entropy(ShellParams(0.5, 5.0), Method::highT);
  CHECK(hot.aS == doctest::Approx(highT_aS(ShellParams(0.5, 5.0))).epsilon(1e-8));
  CHECK(entropy(ShellParams(1e-4, 0.1), Method::exact).aS < 0.0);
  CHECK(entropy(ShellParams(2.0, 0.005), Method::exact).aS > 0.0);
  CHECK_THROWS_AS(entropy(ShellParams(1.0, 0.01), Method::weak1, 0.006), std::domain_error);
  CHECK(default_stencil(0.5) == doctest::Approx(0.025));
  CHECK(default_stencil(0.01) == doctest::Approx(1e-3));
  CHECK(default_stencil(0.001) == doctest::Approx(0.00025));
}

TEST_CASE("sign structure") {
  CHECK(exact_aF(ShellParams(2.0, 0.01)).aF < 0.0);
  CHECK(exact_aF(ShellParams(1e-3, 0.3)).aF > 0.0);
}

TEST_CASE("evaluate dispatches every method") {
  const ShellParams p(0.5, 0.2);
  for (Method m : {Method::exact, Method::weak1, Method::lowT_closed, Method::lowT_integral, Method::strong_lowT,
                   Method::weak_lowT, Method::highT}) {
    const auto s = evaluate(p, m);
    CHECK(s.method == m);
    CHECK(std::isfinite(s.aF));
    CHECK(s.flags.ok());
  }
}

TEST_CASE("forced extended precision reproduces the automatic result") {
  ExactConfig wide;
  wide.precision = PrecisionPolicy::extended;
  const ShellParams p(0.5, 0.2);
  const auto a = exact_aF(p);
  const auto b = exact_aF(p, wide);
  CHECK(std::abs(a.aF - b.aF) <= a.error_estimate + b.error_estimate);
}

TEST_CASE("agreement with the limiting forms inside their regimes") {
  auto ratio = [](double lambda0, double t, auto limit) {
    const ShellParams p(lambda0, t);
    const auto s = exact_aF(p);
    REQUIRE(s.flags.ok());
    return s.aF / limit(p);
  };
  for (double lambda0 : {0.1, 0.3, 1.0, 2.0}) {
    for (double t : {0.005, 0.01, 0.02, 0.05}) {
      CAPTURE(lambda0);
      CAPTURE(t);
      CHECK(ratio(lambda0, t, [](const ShellParams& p) { return lowT_closed_aF(p).aF; }) ==
            doctest::Approx(1.0).epsilon(0.05));
    }
  }
  for (double t : {0.001, 0.002, 0.005}) {
    CHECK(ratio(2.0, t, [](const ShellParams& p) { return strong_lowT_value(p.t()); }) ==
          doctest::Approx(1.0).epsilon(0.1));
  }
  for (double t : {0.05, 0.07, 0.1}) {
    CHECK(ratio(1e-4, t, [](const ShellParams& p) { return weak_lowT_aF(p).aF; }) == doctest::Approx(1.0).epsilon(0.1));
  }
  // First order in lambda0 holds once xi = alpha sqrt(3/(2 lambda0)) is no longer large;
  // below t ~ 0.2 at lambda0 = 1e-3 the higher orders matter.
  for (double lambda0 : {1e-4, 1e-3}) {
    for (double t : {0.2, 0.3, 0.5, 1.0}) {
      CAPTURE(lambda0);
      CAPTURE(t);
      CHECK(ratio(lambda0, t, [](const ShellParams& p) { return weak1_aF(p).aF; }) == doctest::Approx(1.0).epsilon(0.02));
    }
  }
}

TEST_CASE("ratio to the strong-coupling law has an interior extremum") {
  for (double lambda0 : {0.5, 1.0, 2.0}) {
    std::vector<double> r;
    for (int i = 0; i < 20; ++i) {
      const double t = 0.005 * std::pow(100.0, i / 19.0);
      r.push_back(exact_aF(ShellParams(lambda0, t)).aF / strong_lowT_value(t));
    }
    const auto hi = std::max_element(r.begin(), r.end());
    CAPTURE(lambda0);
    CHECK(hi != r.begin());
    CHECK(hi != r.end() - 1);
  }
}
