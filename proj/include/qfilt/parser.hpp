#pragma once

#include <map>
#include <string>

#include "qfilt/rational.hpp"

namespace qfilt {

using SymbolTable = std::map<std::string, double>;

// Parses a rational expression in s.  Accepted grammar: real literals, the
// imaginary unit i (or j), named symbols resolved through `symbols`, the
// Laplace variable s, operators + - * / ^ with integer exponents, and
// parentheses.  The usual shape is a single top-level division
// num_expr/den_expr, but any expression closed under rational arithmetic is
// handled.  With reduce=true common numerator/denominator factors are
// cancelled at a 1e-12 coefficient tolerance.
//
// Throws ParseError (with position), UnresolvedSymbolError, or
// std::domain_error for a zero denominator polynomial.
RationalFunction parse_rational(const std::string& text, const SymbolTable& symbols,
                                bool reduce = false);

}  // namespace qfilt
