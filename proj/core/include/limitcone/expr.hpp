#pragma once

#include <string_view>

#include "limitcone/scalar.hpp"

namespace limitcone {

// Evaluates a numeric expression at the given precision. Decimal literals are
// rounded once; the grammar is + - * / with parentheses, unary minus, the
// constant pi and the functions exp, log, sqrt, sinh, cosh, arcsinh, arccosh.
// Throws Config on malformed input.
Scalar evaluate_expression(std::string_view text, Precision prec);

}  // namespace limitcone
