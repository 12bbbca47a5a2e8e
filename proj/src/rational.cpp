#include "qfilt/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qfilt {

namespace {

// Shortest-ish but exact double formatting: %.17g always round-trips.
std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_coeff(cdouble c) {
  if (c.imag() == 0.0) return fmt_double(c.real());
  return "(" + fmt_double(c.real()) + " + " + fmt_double(c.imag()) + "*i)";
}

std::string fmt_poly(const Poly& p) {
  std::string out;
  for (size_t k = 0; k < p.size(); ++k) {
    if (!out.empty()) out += " + ";
    out += fmt_coeff(p[k]);
    if (k == 1) out += "*s";
    if (k > 1) out += "*s^" + std::to_string(k);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

RationalFunction::RationalFunction(Poly n, Poly d)
    : num(poly::trim(std::move(n))), den(poly::trim(std::move(d))) {
  if (poly::is_zero(den)) throw std::domain_error("rational function with zero denominator");
}

bool RationalFunction::proper() const {
  if (is_zero()) return true;
  return poly::degree(num) <= poly::degree(den);
}

cdouble RationalFunction::eval(cdouble s) const {
  return poly::eval(num, s) / poly::eval(den, s);
}

RationalFunction RationalFunction::conj_coeffs() const {
  return {poly::conj_coeffs(num), poly::conj_coeffs(den)};
}

RationalFunction RationalFunction::scale_variable(cdouble k) const {
  return {poly::scale_variable(num, k), poly::scale_variable(den, k)};
}

RationalFunction RationalFunction::flip_variable() const {
  return {poly::flip_variable(num), poly::flip_variable(den)};
}

RationalFunction RationalFunction::reduce(double rel_tol) const {
  RationalFunction out = *this;
  if (out.is_zero()) {
    out.num = {0.0};
    out.den = {1.0};
    return out;
  }
  Poly g = poly::gcd(out.num, out.den, rel_tol);
  if (poly::degree(g) >= 1) {
    Poly q, r;
    poly::divmod(out.num, g, q, r);
    out.num = q;
    poly::divmod(out.den, g, q, r);
    out.den = q;
  }
  const cdouble lead = out.den.back();
  out.num = poly::scale(out.num, cdouble(1.0) / lead);
  out.den = poly::scale(out.den, cdouble(1.0) / lead);
  return out;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return {poly::add(poly::mul(a.num, b.den), poly::mul(b.num, a.den)),
          poly::mul(a.den, b.den)};
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return {poly::sub(poly::mul(a.num, b.den), poly::mul(b.num, a.den)),
          poly::mul(a.den, b.den)};
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return {poly::mul(a.num, b.num), poly::mul(a.den, b.den)};
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw std::domain_error("division by zero rational function");
  return {poly::mul(a.num, b.den), poly::mul(a.den, b.num)};
}

RationalFunction RationalFunction::operator-() const {
  return {poly::scale(num, -1.0), den};
}

RationalFunction RationalFunction::pow(int e) const {
  if (e < 0) {
    if (is_zero()) throw std::domain_error("negative power of zero");
    return RationalFunction{den, num}.pow(-e);
  }
  RationalFunction acc = constant(1.0);
  for (int i = 0; i < e; ++i) acc = acc * *this;
  return acc;
}

bool approx_equal(const RationalFunction& a, const RationalFunction& b, double rel_tol) {
  // a.num*b.den == b.num*a.den, compared coefficient-wise.
  Poly lhs = poly::mul(a.num, b.den);
  Poly rhs = poly::mul(b.num, a.den);
  Poly diff = poly::sub(lhs, rhs);
  const double scale = std::max({poly::max_abs_coeff(lhs), poly::max_abs_coeff(rhs), 1e-300});
  return poly::max_abs_coeff(diff) <= rel_tol * scale;
}

std::string render(const RationalFunction& r) {
  return "(" + fmt_poly(r.num) + ")/(" + fmt_poly(r.den) + ")";
}

}  // namespace qfilt
