#include "qfilt/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfilt::poly {

double max_abs_coeff(const Poly& p) {
  double m = 0.0;
  for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

Poly trim(Poly p, double rel_tol) {
  const double cutoff = rel_tol * max_abs_coeff(p);
  while (p.size() > 1 && std::abs(p.back()) <= cutoff) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  if (p.size() == 1 && std::abs(p[0]) <= cutoff) p[0] = 0.0;
  return p;
}

bool is_zero(const Poly& p, double rel_tol) {
  Poly t = trim(p, rel_tol);
  return t.size() == 1 && t[0] == cdouble(0.0);
}

int degree(const Poly& p) {
  Poly t = trim(p);
  if (t.size() == 1 && t[0] == cdouble(0.0)) return -1;
  return static_cast<int>(t.size()) - 1;
}

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly sub(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {0.0};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly scale(const Poly& a, cdouble k) {
  Poly out = a;
  for (auto& c : out) c *= k;
  return out;
}

cdouble eval(const Poly& p, cdouble s) {
  cdouble acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly out(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * cdouble(double(i));
  return out;
}

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  Poly bt = trim(b);
  if (degree(bt) < 0) throw std::invalid_argument("polynomial division by zero");
  Poly rt = trim(a);
  const int db = degree(bt);
  const int da = degree(rt);
  if (da < db) {
    q = {0.0};
    r = rt;
    return;
  }
  q.assign(static_cast<size_t>(da - db) + 1, 0.0);
  const cdouble lead = bt.back();
  for (int k = da - db; k >= 0; --k) {
    const cdouble coeff = rt[static_cast<size_t>(k + db)] / lead;
    q[static_cast<size_t>(k)] = coeff;
    for (int j = 0; j <= db; ++j)
      rt[static_cast<size_t>(k + j)] -= coeff * bt[static_cast<size_t>(j)];
  }
  rt.resize(static_cast<size_t>(db) > 0 ? static_cast<size_t>(db) : 1, 0.0);
  r = trim(rt);
}

Poly gcd(Poly a, Poly b, double rel_tol) {
  a = trim(a, rel_tol);
  b = trim(b, rel_tol);
  const double scale0 = std::max(max_abs_coeff(a), max_abs_coeff(b));
  if (degree(a) < degree(b)) std::swap(a, b);
  while (degree(b) >= 0) {
    Poly q, r;
    divmod(a, b, q, r);
    // Remainder negligible against the working scale means b divides a.
    if (max_abs_coeff(r) <= rel_tol * std::max(1.0, scale0)) {
      a = b;
      break;
    }
    a = b;
    b = trim(r, rel_tol);
    if (degree(b) < 0) break;
  }
  if (degree(a) < 1) return {1.0};
  // Normalize monic so cancellation is deterministic.
  const cdouble lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

std::vector<cdouble> roots(const Poly& p) {
  Poly t = trim(p);
  const int n = degree(t);
  if (n <= 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  const cdouble lead = t.back();
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -t[static_cast<size_t>(i)] / lead;
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  std::vector<cdouble> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
  // Deterministic ordering regardless of solver internals.
  std::sort(out.begin(), out.end(), [](cdouble x, cdouble y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

Poly conj_coeffs(Poly p) {
  for (auto& c : p) c = std::conj(c);
  return p;
}

Poly scale_variable(Poly p, cdouble k) {
  cdouble pw = 1.0;
  for (auto& c : p) {
    c *= pw;
    pw *= k;
  }
  return p;
}

Poly flip_variable(Poly p) {
  for (size_t i = 1; i < p.size(); i += 2) p[i] = -p[i];
  return p;
}

}  // namespace qfilt::poly
