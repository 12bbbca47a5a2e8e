#pragma once

#include <complex>
#include <vector>

namespace qfilt {

using cdouble = std::complex<double>;

// Dense univariate polynomial, coefficients in ascending powers of s.
// An empty vector and {0} both denote the zero polynomial.
using Poly = std::vector<cdouble>;

namespace poly {

// Drops trailing (highest-power) coefficients that are negligible relative to
// the largest coefficient magnitude.  A polynomial of all-tiny coefficients
// collapses to {0}.
Poly trim(Poly p, double rel_tol = 1e-12);

bool is_zero(const Poly& p, double rel_tol = 1e-12);

// Degree of the trimmed polynomial; the zero polynomial reports -1.
int degree(const Poly& p);

double max_abs_coeff(const Poly& p);

Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, cdouble k);

// Horner evaluation.
cdouble eval(const Poly& p, cdouble s);

Poly derivative(const Poly& p);

// Euclidean division a = q*b + r with deg r < deg b.  Throws on zero divisor.
void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);

// Monic GCD via the Euclidean algorithm with a relative remainder cutoff.
// Returns {1} when the inputs are coprime at the given tolerance.
Poly gcd(Poly a, Poly b, double rel_tol = 1e-12);

// All roots via the companion-matrix eigenproblem.  Degree 0 gives {}.
std::vector<cdouble> roots(const Poly& p);

// Coefficient-wise complex conjugation.
Poly conj_coeffs(Poly p);

// Variable substitution s -> k*s.
Poly scale_variable(Poly p, cdouble k);

// Variable substitution s -> -s (negates odd coefficients).
Poly flip_variable(Poly p);

}  // namespace poly
}  // namespace qfilt
