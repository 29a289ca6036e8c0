#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace casimir {

/// Angular momentum of a TM mode. The physical mode sum starts at l = 1.
class ModeIndex {
 public:
  explicit ModeIndex(int l);

  int l() const noexcept { return l_; }
  double nu() const noexcept { return l_ + 0.5; }

  friend bool operator==(ModeIndex, ModeIndex) = default;

 private:
  int l_;
};

struct ComplexPoint {
  double re = 0.0;
  double im = 0.0;
};

/// Thrown when an argument lies outside the representable range of a function.
class RangeError : public std::range_error {
 public:
  RangeError(const std::string& what, double x);
  double argument() const noexcept { return x_; }

 private:
  double x_;
};

/// Arithmetic used for a single evaluation.
enum class Precision { standard, extended };

/// Outcome of an evaluation that can lose digits to cancellation.
struct Checked {
  double value = 0.0;
  bool degraded = false;
};

/// Result of evaluating -x^2 - lambda0 f_H(l, ix).
struct ImagAxisPoint {
  ComplexPoint point;
  bool degraded = false;
};

namespace specfun {

/// Relative cancellation below which a result is reported as degraded.
inline constexpr double kDefaultCancellationBound = 1e-7;

// Modified Riccati-Bessel functions s_l = sqrt(pi x/2) I_{l+1/2},
// e_l = sqrt(2x/pi) K_{l+1/2} and their first derivatives. l >= 0.
double riccati_s(int l, double x);
double riccati_e(int l, double x);
double riccati_s_prime(int l, double x);
double riccati_e_prime(int l, double x);

/// f_H(l, x) = x e_l'(x) s_l'(x) on the real axis.
double f_H(ModeIndex l, double x);

// Real-frequency combinations
//   calJ = -sqrt(2x/pi) [x j_l(x)]' = (nu-1/2) J_nu - x J_{nu-1}
//   calY = -sqrt(2x/pi) [x y_l(x)]' = (nu-1/2) Y_nu - x Y_{nu-1}
double calJ(ModeIndex l, double x);
double calY(ModeIndex l, double x);

/// calJ with the cancellation sentinel of the recurrence [x j_l]' = x j_{l-1} - l j_l.
Checked calJ_checked(ModeIndex l, double x,
                     double cancellation_bound = kDefaultCancellationBound,
                     Precision precision = Precision::standard);

/// -x^2 - lambda0 f_H(l, ix) = (-x^2 + lambda0 (pi/2) calJ calY) + i lambda0 (pi/2) calJ^2.
ImagAxisPoint f_H_imag_axis(ModeIndex l, double x, double lambda0,
                            Precision precision = Precision::standard,
                            double cancellation_bound = kDefaultCancellationBound);

struct SeriesTerm {
  int power = 0;
  double coefficient = 0.0;
};

/// Small-x expansion of f_H(l, x): the constant, x^2 and x^{2l+1} terms with
/// power <= max_power. Even powers between x^4 and x^{2l} are not available.
std::vector<SeriesTerm> f_H_series(ModeIndex l, int max_power);

/// Re psi(1 + i/xi) for xi > 0.
double digamma_re_shifted(double xi);

}  // namespace specfun
}  // namespace casimir
