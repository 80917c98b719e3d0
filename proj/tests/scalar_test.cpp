#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "limitcone/expr.hpp"
#include "limitcone/scalar.hpp"

using namespace limitcone;

namespace {

const Precision P256{256};

// Reference decimals below were produced with mpmath at 400 bits.
Scalar ref(const char* digits) { return Scalar::parse(digits, Precision{400}); }

bool close(const Scalar& a, const Scalar& b, long bits) {
  return relative_error(a, b) < pow2(-bits, Precision{64});
}

}  // namespace

TEST_CASE("mixed precision results take the wider operand") {
  Scalar a(1L, Precision{128});
  Scalar b(3L, Precision{512});
  CHECK((a / b).precision() == 512);
  CHECK((b - a).precision() == 512);
  CHECK((a * 7L).precision() == 128);
}

TEST_CASE("decimal literals round once at the target precision") {
  Scalar tenth = Scalar::parse("0.1", P256);
  Scalar via_division = Scalar(1L, P256) / 10L;
  CHECK(tenth == via_division);
  CHECK_THROWS_AS(Scalar::parse("0.1x", P256), Error);
}

TEST_CASE("transcendental values match an independent oracle") {
  CHECK(close(pi(P256), ref("3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803483"), 250));
  CHECK(close(2L * acosh(Scalar::parse("1.5", P256)),
              ref("1.92484730023841378999103565369747369254073733754264207864407267536065547043288709764803772"), 250));
  CHECK(close(acosh(Scalar(3L, P256)), ref("1.76274717403908605046521864995958461805632065652327082150659121730675436844405217566741378"),
              250));
}

TEST_CASE("acosh1p keeps full relative accuracy next to 1") {
  // arccosh(1 + 2^-200): forming 1 + u at 256 bits would keep only 56 bits of u.
  Scalar u = pow2(-200, P256);
  Scalar got = acosh1p(u);
  CHECK(close(got, ref("1.11561779098947160050654927371991468833089081072538501437951686239159160147917987097402388e-30"), 250));

  Scalar u2 = Scalar::parse("0.75", P256);
  CHECK(close(acosh1p(u2), acosh(u2 + 1L), 250));
  CHECK(acosh1p(Scalar(0L, P256)).is_zero());
}

TEST_CASE("acosh rejects arguments below one") {
  CHECK_THROWS_AS(acosh(Scalar::parse("0.999", P256)), Error);
}

TEST_CASE("approx_equal refuses tolerances below the noise floor") {
  Scalar a(1L, P256);
  Scalar b = a + pow2(-250, P256);
  CHECK(approx_equal(a, b, pow2(-200, P256)));
  CHECK_FALSE(approx_equal(a, a + pow2(-200, P256), pow2(-220, P256)));
  try {
    approx_equal(a, b, pow2(-249, P256));
    FAIL("expected ToleranceTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ToleranceTooSmall);
  }
}

TEST_CASE("to_string round-trips") {
  Scalar x = pi(P256) / 7L;
  CHECK(Scalar::parse(x.to_string(), P256) == x);
  CHECK(Scalar(1.5, P256).to_string(5) == "1.5000e+00");
}

TEST_CASE("expressions evaluate at the requested precision") {
  CHECK(evaluate_expression("exp(6)", P256) == exp(Scalar(6L, P256)));
  CHECK(evaluate_expression("2*(3 - 1)/4", P256) == 1L);
  CHECK(evaluate_expression("-arcsinh(1)", P256) == -asinh(Scalar(1L, P256)));
  CHECK(close(evaluate_expression("(8 + 2*sqrt(2))/8", P256),
              (Scalar(8L, P256) + 2L * sqrt(Scalar(2L, P256))) / 8L, 250));
  CHECK(evaluate_expression("1e-4", P256) == Scalar::parse("1e-4", P256));
  for (const char* bad : {"", "1 +", "foo(2)", "(1", "2 ** 3", "log(0) x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(evaluate_expression(bad, P256), Error);
  }
}
