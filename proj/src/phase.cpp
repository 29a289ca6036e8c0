#include "casimir/phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

namespace casimir {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kLogCells = 64;
constexpr double kOscillationStep = std::numbers::pi / 4.0;
constexpr double kRootTolerance = 1e-13;
constexpr int kMaxCellSplits = 20;

ImagAxisPoint evaluate(ModeIndex l, double x, double lambda0, PrecisionPolicy policy) {
  if (policy == PrecisionPolicy::extended) return specfun::f_H_imag_axis(l, x, lambda0, Precision::extended);
  ImagAxisPoint p = specfun::f_H_imag_axis(l, x, lambda0, Precision::standard);
  if (p.degraded && policy == PrecisionPolicy::automatic) {
    p = specfun::f_H_imag_axis(l, x, lambda0, Precision::extended);
  }
  return p;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

PrecisionPolicy precision_policy_from_env(PrecisionPolicy fallback) {
  const char* v = std::getenv("CASIMIR_SHELL_PRECISION");
  if (v == nullptr) return fallback;
  const std::string s(v);
  if (s == "extended") return PrecisionPolicy::extended;
  if (s == "standard" || s == "double") return PrecisionPolicy::standard;
  if (s == "automatic" || s == "auto") return PrecisionPolicy::automatic;
  return fallback;
}

MeshResolutionError::MeshResolutionError(double lo, double hi)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "zero search could not separate sign changes in cell [" << lo << ", " << hi << "]";
        return os.str();
      }()),
      lo_(lo),
      hi_(hi) {}

double arg_branch(ComplexPoint p) {
  if (p.re == 0.0 && p.im == 0.0) throw std::domain_error("arg_branch: argument is zero");
  if (p.re == 0.0) return kHalfPi;
  return std::atan(p.im / p.re);
}

ModePhaseTerm mode_phase(ModeIndex l, double x, double lambda0, PrecisionPolicy policy) {
  if (lambda0 == 0.0) {
    return {l, x, 0.0, -x * x, 0.0, false};
  }
  const ImagAxisPoint p = evaluate(l, x, lambda0, policy);
  return {l, x, arg_branch(p.point), p.point.re, p.point.im, p.degraded};
}

double denominator(ModeIndex l, double x, double lambda0) {
  return evaluate(l, x, lambda0, PrecisionPolicy::automatic).point.re;
}

SingularitySet find_denominator_zeros(ModeIndex l, double lambda0, double x_max) {
  if (!(lambda0 > 0.0)) throw std::domain_error("find_denominator_zeros: lambda0 must be > 0");
  if (!(x_max > 0.0)) throw std::domain_error("find_denominator_zeros: x_max must be > 0");

  SingularitySet out{l, {}, {}, {}};
  const double li = l.l();
  const double nu = l.nu();
  auto re = [&](double x) { return denominator(l, x, lambda0); };

  // Near the origin re -> lambda0 l(l+1)/(2l+1) > 0; start three decades below
  // the small-x estimate of the first root.
  double x_lo = 1e-3 * std::sqrt(lambda0 * li * (li + 1.0) / (2.0 * li + 1.0));
  for (int i = 0; i < 8 && re(x_lo) <= 0.0; ++i) x_lo *= 1e-3;
  if (x_lo >= x_max) return out;

  std::vector<double> mesh;
  const double log_end = std::min(nu, x_max);
  if (log_end > x_lo) {
    const double ratio = std::log(log_end / x_lo);
    for (int i = 0; i <= kLogCells; ++i) mesh.push_back(x_lo * std::exp(ratio * i / kLogCells));
    mesh.back() = log_end;
  } else {
    mesh.push_back(x_lo);
  }
  for (double x = mesh.back() + kOscillationStep; x < x_max; x += kOscillationStep) mesh.push_back(x);
  if (mesh.back() < x_max) mesh.push_back(x_max);

  auto refine = [&](double a, double b, double fa) {
    for (int it = 0; it < 200 && (b - a) > kRootTolerance * std::abs(0.5 * (a + b)); ++it) {
      const double m = 0.5 * (a + b);
      const double fm = re(m);
      if (fm == 0.0) return std::pair{m, m};
      if (sign_of(fm) == sign_of(fa)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return std::pair{a, b};
  };

  auto record = [&](double a, double b, double fa) {
    const auto [lo, hi] = refine(a, b, fa);
    const double x0 = 0.5 * (lo + hi);
    const Checked j = specfun::calJ_checked(l, x0);
    const double h = 1e-6 * x0;
    const double slope = (re(x0 + h) - re(x0 - h)) / (2.0 * h);
    const bool flat = std::abs(slope) * x0 < 1e-10 * x0 * x0;
    out.zeros.push_back(x0);
    out.degenerate.push_back(j.degraded || flat);
    out.brackets.emplace_back(a, b);
  };

  // Each cell is checked at its midpoint; equal end signs with a differing
  // midpoint means a hidden pair of roots, which is split until separated.
  auto scan = [&](auto&& self, double a, double b, double fa, double fb, int depth) -> void {
    const double m = 0.5 * (a + b);
    const double fm = re(m);
    const int sa = sign_of(fa), sb = sign_of(fb), sm = sign_of(fm);
    if (sa != sb) {
      if (sm != sa && sm != sb) {
        record(a, m, fa);
        return;
      }
      if (sm == sa) {
        record(m, b, fm);
      } else {
        record(a, m, fa);
      }
      return;
    }
    if (sm == sa) return;
    if (depth >= kMaxCellSplits) throw MeshResolutionError(a, b);
    self(self, a, m, fa, fm, depth + 1);
    self(self, m, b, fm, fb, depth + 1);
  };

  double fa = re(mesh.front());
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double fb = re(mesh[i + 1]);
    scan(scan, mesh[i], mesh[i + 1], fa, fb, 0);
    fa = fb;
  }
  return out;
}

PhaseSingularities collect_singularities(double lambda0, double x_max, double feature_floor) {
  PhaseSingularities out;
  if (lambda0 <= 0.0) return out;
  constexpr int kQuietModesToStop = 3;
  constexpr int kHardCap = 4000;
  int quiet = 0;
  for (int li = 1; li <= kHardCap && quiet < kQuietModesToStop; ++li) {
    const ModeIndex l(li);
    const SingularitySet set = find_denominator_zeros(l, lambda0, x_max);
    bool visible = false;
    for (std::size_t k = 0; k < set.zeros.size(); ++k) {
      const double x0 = set.zeros[k];
      const double im = specfun::f_H_imag_axis(l, x0, lambda0).point.im;
      // The jump is spread over |dx| ~ im / |d re/dx| ~ im / (2 x0).
      if (im < feature_floor * x0 * x0) continue;
      visible = true;
      if (set.degenerate[k]) {
        out.breakpoints.push_back(x0);
      } else {
        out.pv_points.push_back(x0);
      }
    }
    quiet = visible ? 0 : quiet + 1;
    out.l_searched = li;
  }
  std::sort(out.pv_points.begin(), out.pv_points.end());
  std::sort(out.breakpoints.begin(), out.breakpoints.end());
  return out;
}

}  // namespace casimir
