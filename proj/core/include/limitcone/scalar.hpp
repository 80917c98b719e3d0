#pragma once

#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

#include "limitcone/error.hpp"

namespace limitcone {

// Mantissa width in bits.
struct Precision {
  long bits;
};

inline constexpr long kMinPrecisionBits = 64;
inline constexpr long kDefaultPrecisionBits = 256;

// Arbitrary-precision binary floating-point real.
//
// Binary operations produce a result at the larger of the two operand
// precisions; operations with machine integers or doubles keep the precision
// of the Scalar operand. All rounding is to nearest.
class Scalar {
 public:
  Scalar() : Scalar(Precision{kDefaultPrecisionBits}) {}
  explicit Scalar(Precision prec);
  Scalar(long value, Precision prec);
  Scalar(int value, Precision prec) : Scalar(static_cast<long>(value), prec) {}
  Scalar(double value, Precision prec);

  // Decimal literal ("1.5", "-3e-4"), rounded once at the target precision.
  static Scalar parse(std::string_view text, Precision prec);

  Scalar(const Scalar& other);
  Scalar(Scalar&& other) noexcept;
  Scalar& operator=(const Scalar& other);
  Scalar& operator=(Scalar&& other) noexcept;
  ~Scalar();

  long precision() const { return mpfr_get_prec(v_); }
  Precision prec() const { return Precision{precision()}; }

  // Same value rounded to a new precision.
  Scalar with_precision(Precision prec) const;

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Scientific notation with the given number of significant digits; 0 picks
  // enough digits to round-trip at the current precision.
  std::string to_string(int digits = 0) const;

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  long exponent() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);
  Scalar& operator+=(long rhs);
  Scalar& operator-=(long rhs);
  Scalar& operator*=(long rhs);
  Scalar& operator/=(long rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs);
  friend Scalar operator-(Scalar lhs, const Scalar& rhs);
  friend Scalar operator*(Scalar lhs, const Scalar& rhs);
  friend Scalar operator/(Scalar lhs, const Scalar& rhs);
  friend Scalar operator+(Scalar lhs, long rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, long rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, long rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, long rhs) { return lhs /= rhs; }
  friend Scalar operator+(long lhs, Scalar rhs) { return rhs += lhs; }
  friend Scalar operator-(long lhs, const Scalar& rhs) { return -rhs + lhs; }
  friend Scalar operator*(long lhs, Scalar rhs) { return rhs *= lhs; }
  friend Scalar operator/(long lhs, const Scalar& rhs);

  friend bool operator==(const Scalar& a, const Scalar& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const Scalar& a, long b);

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  mpfr_t v_;
};

Scalar abs(const Scalar& x);
Scalar sqr(const Scalar& x);
Scalar sqrt(const Scalar& x);
Scalar exp(const Scalar& x);
Scalar expm1(const Scalar& x);
Scalar log(const Scalar& x);
Scalar log1p(const Scalar& x);
Scalar sinh(const Scalar& x);
Scalar cosh(const Scalar& x);
Scalar tanh(const Scalar& x);
Scalar asinh(const Scalar& x);
// Requires x >= 1; throws InvalidArgument otherwise.
Scalar acosh(const Scalar& x);
// arccosh(1 + u) for u >= 0 without forming 1 + u.
Scalar acosh1p(const Scalar& u);
Scalar sin(const Scalar& x);
Scalar cos(const Scalar& x);
Scalar acos(const Scalar& x);
Scalar atan2(const Scalar& y, const Scalar& x);
Scalar max(const Scalar& a, const Scalar& b);
Scalar min(const Scalar& a, const Scalar& b);
Scalar pi(Precision prec);
// 2^k at the given precision.
Scalar pow2(long k, Precision prec);

long max_precision(const Scalar& a, const Scalar& b);

// |a - b| <= tol * max(1, |a|, |b|). The tolerance must be at least
// 2^(8 - p) where p is the larger operand precision, otherwise the comparison
// cannot be trusted and ToleranceTooSmall is thrown.
bool approx_equal(const Scalar& a, const Scalar& b, const Scalar& tol);
// Relative error |a - b| / max(|a|, |b|) (0 when both vanish).
Scalar relative_error(const Scalar& a, const Scalar& b);

}  // namespace limitcone
