#pragma once

#include <string>

#include "qfilt/poly.hpp"

namespace qfilt {

// Ratio of two polynomials in s, ascending coefficient order.  The value class
// for every transfer-function entry in this project.  No implicit reduction:
// cancellation of common factors happens only through reduce().
struct RationalFunction {
  Poly num{0.0};
  Poly den{1.0};

  RationalFunction() = default;
  RationalFunction(Poly n, Poly d);

  static RationalFunction constant(cdouble c) { return {{c}, {1.0}}; }
  static RationalFunction variable() { return {{0.0, 1.0}, {1.0}}; }

  bool is_zero() const { return poly::is_zero(num); }

  // deg num <= deg den (constants count as degree 0).
  bool proper() const;

  cdouble eval(cdouble s) const;

  // Coefficient-wise conjugation of numerator and denominator: the creation
  // image g#(s) of an entry g(s).
  RationalFunction conj_coeffs() const;

  // g(k*s).
  RationalFunction scale_variable(cdouble k) const;

  // g(-s).
  RationalFunction flip_variable() const;

  // Cancels common factors via a tolerance-based polynomial GCD and makes the
  // denominator's leading coefficient 1.
  RationalFunction reduce(double rel_tol = 1e-12) const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  // Throws std::domain_error when b.num is the zero polynomial.
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction operator-() const;

  // Integer power; negative exponents invert (zero base rejected then).
  RationalFunction pow(int e) const;
};

// Value-level comparison by cross-multiplication; tolerant of common factors
// and scalar normalizations.
bool approx_equal(const RationalFunction& a, const RationalFunction& b, double rel_tol = 1e-9);

// Renders with full precision so parse(render(r)) reproduces r numerically,
// e.g. "(-1 + 1*s)/(1 + 1*s)".
std::string render(const RationalFunction& r);

}  // namespace qfilt
