#include "limitcone/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace limitcone {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ToleranceTooSmall: return "ToleranceTooSmall";
    case ErrorCode::NonHyperbolic: return "NonHyperbolic";
    case ErrorCode::OrientationReversing: return "OrientationReversing";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::Crossing: return "Crossing";
    case ErrorCode::Asymptotic: return "Asymptotic";
    case ErrorCode::NonHyperbolicResolution: return "NonHyperbolicResolution";
    case ErrorCode::TraceOutOfRange: return "TraceOutOfRange";
    case ErrorCode::NotDiscretelike: return "NotDiscretelike";
    case ErrorCode::LengthNonPositive: return "LengthNonPositive";
    case ErrorCode::NonConvexCocompact: return "NonConvexCocompact";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::NonPositiveParam: return "NonPositiveParam";
    case ErrorCode::EmbeddingFailure: return "EmbeddingFailure";
    case ErrorCode::FootOutsideSide: return "FootOutsideSide";
    case ErrorCode::AdjustmentFailed: return "AdjustmentFailed";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegenerateHull: return "DegenerateHull";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

long checked(Precision prec) {
  if (prec.bits < kMinPrecisionBits || prec.bits > MPFR_PREC_MAX) {
    throw Error(ErrorCode::InvalidArgument,
                "precision must be at least " + std::to_string(kMinPrecisionBits) + " bits, got " +
                    std::to_string(prec.bits));
  }
  return prec.bits;
}

// Result of a unary function at the argument's precision.
template <typename Fn>
Scalar unary(const Scalar& x, Fn fn) {
  Scalar r(x.prec());
  fn(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

}  // namespace

Scalar::Scalar(Precision prec) {
  mpfr_init2(v_, checked(prec));
  mpfr_set_zero(v_, 1);
}

Scalar::Scalar(long value, Precision prec) {
  mpfr_init2(v_, checked(prec));
  mpfr_set_si(v_, value, MPFR_RNDN);
}

Scalar::Scalar(double value, Precision prec) {
  mpfr_init2(v_, checked(prec));
  mpfr_set_d(v_, value, MPFR_RNDN);
}

Scalar Scalar::parse(std::string_view text, Precision prec) {
  Scalar r(prec);
  std::string buf(text);
  char* end = nullptr;
  if (!buf.empty()) mpfr_strtofr(r.v_, buf.c_str(), &end, 10, MPFR_RNDN);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw Error(ErrorCode::InvalidArgument, "not a decimal number: '" + buf + "'");
  }
  return r;
}

Scalar::Scalar(const Scalar& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Scalar::Scalar(Scalar&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

Scalar& Scalar::operator=(const Scalar& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Scalar& Scalar::operator=(Scalar&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Scalar::~Scalar() { mpfr_clear(v_); }

Scalar Scalar::with_precision(Precision prec) const {
  Scalar r(prec);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string Scalar::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return sign() > 0 ? "inf" : "-inf";
  if (digits <= 0) digits = static_cast<int>(std::ceil(precision() * 0.30102999566398120)) + 1;
  char* out = nullptr;
  mpfr_asprintf(&out, "%.*Re", digits - 1, v_);
  std::string s(out);
  mpfr_free_str(out);
  return s;
}

long Scalar::exponent() const {
  if (is_zero() || !is_finite()) return 0;
  return mpfr_get_exp(v_);
}

Scalar Scalar::operator-() const {
  Scalar r(prec());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

namespace {

void widen(Scalar& lhs, const Scalar& rhs) {
  if (rhs.precision() > lhs.precision()) mpfr_prec_round(lhs.raw(), rhs.precision(), MPFR_RNDN);
}

}  // namespace

Scalar& Scalar::operator+=(const Scalar& rhs) {
  widen(*this, rhs);
  mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}
Scalar& Scalar::operator-=(const Scalar& rhs) {
  widen(*this, rhs);
  mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}
Scalar& Scalar::operator*=(const Scalar& rhs) {
  widen(*this, rhs);
  mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}
Scalar& Scalar::operator/=(const Scalar& rhs) {
  widen(*this, rhs);
  mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}
Scalar& Scalar::operator+=(long rhs) {
  mpfr_add_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Scalar& Scalar::operator-=(long rhs) {
  mpfr_sub_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Scalar& Scalar::operator*=(long rhs) {
  mpfr_mul_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}
Scalar& Scalar::operator/=(long rhs) {
  mpfr_div_si(v_, v_, rhs, MPFR_RNDN);
  return *this;
}

Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }

Scalar operator/(long lhs, const Scalar& rhs) {
  Scalar r(rhs.prec());
  mpfr_si_div(r.v_, lhs, rhs.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const Scalar& a, long b) {
  if (mpfr_nan_p(a.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

Scalar abs(const Scalar& x) { return unary(x, mpfr_abs); }
Scalar sqr(const Scalar& x) { return unary(x, mpfr_sqr); }
Scalar sqrt(const Scalar& x) { return unary(x, mpfr_sqrt); }
Scalar exp(const Scalar& x) { return unary(x, mpfr_exp); }
Scalar expm1(const Scalar& x) { return unary(x, mpfr_expm1); }
Scalar log(const Scalar& x) { return unary(x, mpfr_log); }
Scalar log1p(const Scalar& x) { return unary(x, mpfr_log1p); }
Scalar sinh(const Scalar& x) { return unary(x, mpfr_sinh); }
Scalar cosh(const Scalar& x) { return unary(x, mpfr_cosh); }
Scalar tanh(const Scalar& x) { return unary(x, mpfr_tanh); }
Scalar asinh(const Scalar& x) { return unary(x, mpfr_asinh); }
Scalar sin(const Scalar& x) { return unary(x, mpfr_sin); }
Scalar cos(const Scalar& x) { return unary(x, mpfr_cos); }
Scalar acos(const Scalar& x) { return unary(x, mpfr_acos); }

Scalar acosh(const Scalar& x) {
  if (x < 1) throw Error(ErrorCode::InvalidArgument, "acosh of " + x.to_string(20) + " < 1");
  return acosh1p(x - 1);
}

Scalar acosh1p(const Scalar& u) {
  if (u < 0) throw Error(ErrorCode::InvalidArgument, "acosh1p of negative " + u.to_string(20));
  // arccosh(1 + u) = log1p(u + sqrt(u (2 + u))); no subtraction anywhere.
  return log1p(u + sqrt(u * (u + 2)));
}

Scalar atan2(const Scalar& y, const Scalar& x) {
  Scalar r(Precision{max_precision(y, x)});
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Scalar max(const Scalar& a, const Scalar& b) {
  return (a < b ? b : a).with_precision(Precision{max_precision(a, b)});
}
Scalar min(const Scalar& a, const Scalar& b) {
  return (b < a ? b : a).with_precision(Precision{max_precision(a, b)});
}

Scalar pi(Precision prec) {
  Scalar r(prec);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Scalar pow2(long k, Precision prec) {
  Scalar r(1L, prec);
  mpfr_mul_2si(r.raw(), r.raw(), k, MPFR_RNDN);
  return r;
}

long max_precision(const Scalar& a, const Scalar& b) { return std::max(a.precision(), b.precision()); }

bool approx_equal(const Scalar& a, const Scalar& b, const Scalar& tol) {
  long p = max_precision(a, b);
  if (tol < pow2(8 - p, Precision{p})) {
    throw Error(ErrorCode::ToleranceTooSmall,
                "tolerance " + tol.to_string(6) + " below 2^(8-" + std::to_string(p) + ")");
  }
  Scalar scale = max(Scalar(1L, Precision{p}), max(abs(a), abs(b)));
  return abs(a - b) <= tol * scale;
}

Scalar relative_error(const Scalar& a, const Scalar& b) {
  Scalar scale = max(abs(a), abs(b));
  if (scale.is_zero()) return Scalar(Precision{max_precision(a, b)});
  return abs(a - b) / scale;
}

}  // namespace limitcone
