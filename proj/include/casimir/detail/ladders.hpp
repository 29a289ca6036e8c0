#pragma once

// Recurrence ladders for the spherical Bessel functions of half-integer order
// at a fixed argument, templated on the floating type so the same code runs in
// double and in 113-bit software floats.
//
// Values are stored as mantissa * 2^exponent so that the ladders survive the
// x << l corner where j_l underflows and y_l overflows long before their
// products (the only combinations the phase needs) leave the double range.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace casimir::detail {

template <class Real>
struct Scaled {
  Real mantissa{0};
  int exponent = 0;

  Real value() const {
    using std::ldexp;
    return ldexp(mantissa, exponent);
  }
};

inline constexpr int kRescaleBits = 600;

template <class Real>
void renormalize(Real& m, int& e) {
  using std::abs;
  using std::ldexp;
  static const Real big = ldexp(Real(1), kRescaleBits);
  static const Real small = ldexp(Real(1), -kRescaleBits);
  if (abs(m) > big) {
    m = ldexp(m, -kRescaleBits);
    e += kRescaleBits;
  } else if (m != 0 && abs(m) < small) {
    m = ldexp(m, kRescaleBits);
    e -= kRescaleBits;
  }
}

/// a*2^ea + b*2^eb, evaluated in the frame of the larger exponent.
template <class Real>
Scaled<Real> add_scaled(Real a, int ea, Real b, int eb) {
  using std::ldexp;
  const int e = std::max(ea, eb);
  const int da = ea - e;
  const int db = eb - e;
  const Real ta = da < -2 * kRescaleBits ? Real(0) : ldexp(a, da);
  const Real tb = db < -2 * kRescaleBits ? Real(0) : ldexp(b, db);
  return {ta + tb, e};
}

/// Starting order for backward ratio recurrences, enough to converge
/// the continued fraction to working precision at order max(lmax, x).
inline int backward_start(int lmax, double x, double accuracy_factor) {
  const int m = std::max(lmax, static_cast<int>(std::ceil(x)));
  return m + static_cast<int>(std::ceil(std::sqrt(accuracy_factor * std::max(m, 1)))) + 16;
}

template <class Real>
constexpr double accuracy_factor() {
  return sizeof(Real) > sizeof(double) ? 240.0 : 60.0;
}

/// Spherical j_l, y_l for l = 0..lmax at fixed x > 0, plus the Riccati derivatives
/// [x j_l]' and [x y_l]'.
template <class Real>
class SphericalLadder {
 public:
  SphericalLadder(Real x, int lmax) : x_(x), lmax_(std::max(lmax, 1)) {
    using std::cos;
    using std::floor;
    using std::sin;
    const int n = lmax_;
    jm_.assign(n + 1, Real(0));
    je_.assign(n + 1, 0);
    ym_.assign(n + 1, Real(0));
    ye_.assign(n + 1, 0);

    const Real sx = sin(x);
    const Real cx = cos(x);

    // j_l: upward while l <= x (neutral there), ratios from the top beyond.
    const int upward = std::min(n, static_cast<int>(floor(x)));
    jm_[0] = sx / x;
    if (upward >= 1) {
      jm_[1] = (sx / x - cx) / x;
      for (int l = 1; l < upward; ++l) {
        jm_[l + 1] = Real(2 * l + 1) / x * jm_[l] - jm_[l - 1];
      }
    }
    if (n > upward) {
      const int start = backward_start(n, static_cast<double>(x), accuracy_factor<Real>());
      Real r(0);
      for (int l = start; l > n; --l) r = x / (Real(2 * l + 1) - x * r);
      std::vector<Real> ratio(n + 1, Real(0));
      for (int l = n; l > upward; --l) {
        r = x / (Real(2 * l + 1) - x * r);
        ratio[l] = r;
      }
      for (int l = upward + 1; l <= n; ++l) {
        Real m = ratio[l] * jm_[l - 1];
        int e = je_[l - 1];
        renormalize(m, e);
        jm_[l] = m;
        je_[l] = e;
      }
    }

    // y_l: upward recurrence is stable for all orders.
    ym_[0] = -cx / x;
    ym_[1] = -(cx / x + sx) / x;
    Real prev = ym_[0];
    Real cur = ym_[1];
    int frame = 0;
    for (int l = 1; l < n; ++l) {
      Real next = Real(2 * l + 1) / x * cur - prev;
      int e = frame;
      renormalize(next, e);
      if (e != frame) {
        using std::ldexp;
        cur = ldexp(cur, frame - e);
        frame = e;
      }
      prev = cur;
      cur = next;
      ym_[l + 1] = next;
      ye_[l + 1] = frame;
    }
  }

  Real x() const { return x_; }
  int lmax() const { return lmax_; }

  Scaled<Real> j(int l) const { return {jm_[l], je_[l]}; }
  Scaled<Real> y(int l) const { return {ym_[l], ye_[l]}; }

  /// [x j_l(x)]'
  Scaled<Real> dj(int l) const {
    using std::cos;
    if (l == 0) return {cos(x_), 0};
    return add_scaled(x_ * jm_[l - 1], je_[l - 1], -Real(l) * jm_[l], je_[l]);
  }

  /// [x y_l(x)]'
  Scaled<Real> dy(int l) const {
    using std::sin;
    if (l == 0) return {sin(x_), 0};
    return add_scaled(x_ * ym_[l - 1], ye_[l - 1], -Real(l) * ym_[l], ye_[l]);
  }

  /// |[x j_l]'| / (|x j_{l-1}| + |l j_l|): 1 means no cancellation.
  Real dj_cancellation(int l) const {
    using std::abs;
    if (l == 0) return Real(1);
    const Scaled<Real> d = dj(l);
    const Scaled<Real> mag = add_scaled(abs(x_ * jm_[l - 1]), je_[l - 1], abs(Real(l) * jm_[l]), je_[l]);
    if (mag.mantissa == 0) return Real(1);
    using std::ldexp;
    return abs(d.mantissa) / ldexp(mag.mantissa, mag.exponent - d.exponent);
  }

  /// x [x j_l]' [x y_l]', which equals (pi/2) calJ calY. O(l) in size, never overflows.
  Real jy_product(int l) const {
    using std::ldexp;
    const Scaled<Real> a = dj(l);
    const Scaled<Real> b = dy(l);
    return ldexp(x_ * a.mantissa * b.mantissa, a.exponent + b.exponent);
  }

  /// x ([x j_l]')^2, which equals (pi/2) calJ^2.
  Real jj_product(int l) const {
    using std::ldexp;
    const Scaled<Real> a = dj(l);
    return ldexp(x_ * a.mantissa * a.mantissa, 2 * a.exponent);
  }

 private:
  Real x_;
  int lmax_;
  std::vector<Real> jm_;
  std::vector<int> je_;
  std::vector<Real> ym_;
  std::vector<int> ye_;
};

/// Modified Riccati-Bessel ladders s_l = x i_l (l = 0..lmax+1) and
/// e_l (l = -1..lmax, with e_{-1} = e_0).
template <class Real>
class ModifiedLadder {
 public:
  ModifiedLadder(Real x, int lmax) : x_(x), lmax_(std::max(lmax, 0)) {
    using std::exp;
    using std::sinh;
    const int n = lmax_ + 1;
    sm_.assign(n + 1, Real(0));
    se_.assign(n + 1, 0);
    em_.assign(lmax_ + 2, Real(0));
    ee_.assign(lmax_ + 2, 0);

    // i_l by downward ratios rho_l = i_l / i_{l-1}, anchored at i_0 = sinh x / x.
    sm_[0] = sinh(x);
    const int start = backward_start(n, static_cast<double>(x), accuracy_factor<Real>());
    Real rho(0);
    for (int l = start; l > n; --l) rho = x / (Real(2 * l + 1) + x * rho);
    std::vector<Real> ratio(n + 1, Real(0));
    for (int l = n; l >= 1; --l) {
      rho = x / (Real(2 * l + 1) + x * rho);
      ratio[l] = rho;
    }
    for (int l = 1; l <= n; ++l) {
      Real m = ratio[l] * sm_[l - 1];
      int e = se_[l - 1];
      renormalize(m, e);
      sm_[l] = m;
      se_[l] = e;
    }

    // e_l upward; index shifted by one so that slot 0 holds e_{-1} = e_0.
    const Real e0 = exp(-x);
    em_[0] = e0;
    em_[1] = e0;
    if (lmax_ >= 1) em_[2] = e0 * (Real(1) + Real(1) / x);
    int frame = 0;
    for (int l = 1; l < lmax_; ++l) {
      Real next = em_[l] + Real(2 * l + 1) / x * em_[l + 1];
      int e = frame;
      renormalize(next, e);
      if (e != frame) {
        using std::ldexp;
        em_[l + 1] = ldexp(em_[l + 1], frame - e);
        ee_[l + 1] = e;
        frame = e;
      }
      em_[l + 2] = next;
      ee_[l + 2] = frame;
    }
  }

  Real x() const { return x_; }

  Scaled<Real> s(int l) const { return {sm_[l], se_[l]}; }
  Scaled<Real> e(int l) const { return {em_[l + 1], ee_[l + 1]}; }

  /// s_l' = ((l+1)/x) s_l + s_{l+1}; both terms positive.
  Scaled<Real> s_prime(int l) const {
    return add_scaled(Real(l + 1) / x_ * sm_[l], se_[l], sm_[l + 1], se_[l + 1]);
  }

  /// e_l' = -e_{l-1} - (l/x) e_l; both terms negative.
  Scaled<Real> e_prime(int l) const {
    return add_scaled(-em_[l], ee_[l], -Real(l) / x_ * em_[l + 1], ee_[l + 1]);
  }

 private:
  Real x_;
  int lmax_;
  std::vector<Real> sm_;
  std::vector<int> se_;
  std::vector<Real> em_;
  std::vector<int> ee_;
};

}  // namespace casimir::detail
