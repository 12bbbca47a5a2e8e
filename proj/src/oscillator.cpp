#include "qfilt/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "qfilt/errors.hpp"
#include "qfilt/realizability.hpp"

namespace qfilt {

GeneralizedOpenOscillator GeneralizedOpenOscillator::sized(int n_, int m_) {
  GeneralizedOpenOscillator goo;
  goo.n = n_;
  goo.m = m_;
  goo.S = Eigen::MatrixXcd::Identity(m_, m_);
  goo.K = Eigen::MatrixXcd::Zero(m_, 2 * n_);
  goo.Omega = Eigen::MatrixXcd::Zero(2 * n_, 2 * n_);
  return goo;
}

void GeneralizedOpenOscillator::validate() const {
  if (n < 0 || m <= 0)
    throw std::invalid_argument("oscillator with n < 0 or m <= 0");
  if (S.rows() != m || S.cols() != m) throw std::invalid_argument("S has wrong shape");
  if (K.rows() != m || K.cols() != 2 * n) throw std::invalid_argument("K has wrong shape");
  if (Omega.rows() != 2 * n || Omega.cols() != 2 * n)
    throw std::invalid_argument("Omega has wrong shape");
  if (!S.allFinite() || !K.allFinite() || !Omega.allFinite())
    throw std::invalid_argument("oscillator matrices contain non-finite entries");
  if ((Omega - Omega.adjoint()).norm() > 1e-9 * std::max(1.0, Omega.norm()))
    throw std::invalid_argument("Omega must be Hermitian");
}

BasisMaps basis_maps(int n) {
  BasisMaps bm;
  bm.U = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  bm.Theta = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  bm.P = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < n; ++k) {
    bm.U(2 * k, 2 * k) = r;
    bm.U(2 * k, 2 * k + 1) = cdouble(0.0, r);
    bm.U(2 * k + 1, 2 * k) = r;
    bm.U(2 * k + 1, 2 * k + 1) = cdouble(0.0, -r);
    bm.Theta(2 * k, 2 * k + 1) = 1.0;
    bm.Theta(2 * k + 1, 2 * k) = -1.0;
    bm.P(k, 2 * k) = 1.0;
    bm.P(n + k, 2 * k + 1) = 1.0;
  }
  return bm;
}

GeneralizedOpenOscillator extract_slh(const StateSpace& ss) {
  const RealizabilityReport rep = check_realizable(ss, 1e-8);
  if (!rep.pass)
    throw ConditionError("realizability",
                         "realizability residuals too large for oscillator extraction");
  const TransformConditions tc = check_transform_conditions(ss);
  if (!tc.d_ok)
    throw ConditionError("feedthrough unitarity",
                         "feedthrough matrix must be unitary symplectic");

  GeneralizedOpenOscillator goo = GeneralizedOpenOscillator::sized(ss.n, ss.m);
  for (int k = 0; k < ss.m; ++k)
    for (int l = 0; l < ss.m; ++l) goo.S(k, l) = ss.D(2 * k, 2 * l);
  for (int k = 0; k < ss.m; ++k) goo.K.row(k) = ss.C.row(2 * k);
  if (ss.n > 0) {
    const Eigen::MatrixXcd J = J_of(ss.n);
    Eigen::MatrixXcd Om = cdouble(0.0, 0.25) * (J * ss.A - ss.A.adjoint() * J);
    goo.Omega = 0.5 * (Om + Om.adjoint());
  }
  return goo;
}

StateSpace slh_to_ss(const GeneralizedOpenOscillator& goo) {
  goo.validate();
  StateSpace ss = StateSpace::sized(goo.n, goo.m);
  for (int k = 0; k < goo.m; ++k)
    for (int l = 0; l < goo.m; ++l) {
      ss.D(2 * k, 2 * l) = goo.S(k, l);
      ss.D(2 * k + 1, 2 * l + 1) = std::conj(goo.S(k, l));
    }
  if (goo.n == 0) return ss;

  const Eigen::MatrixXcd J = J_of(goo.n);
  const Eigen::MatrixXcd Jm = J_of(goo.m);
  const Eigen::MatrixXcd Ln = pair_swap(goo.n);
  for (int k = 0; k < goo.m; ++k) {
    ss.C.row(2 * k) = goo.K.row(k);
    ss.C.row(2 * k + 1) = -(goo.K.row(k).conjugate()) * Ln;
  }
  ss.B = -J * ss.C.adjoint() * Jm * ss.D;
  ss.A = cdouble(0.0, -2.0) * J * goo.Omega - 0.5 * J * ss.C.adjoint() * Jm * ss.C;
  return ss;
}

Eigen::MatrixXd hamiltonian_matrix_quadrature(const Eigen::MatrixXd& A_r) {
  const int N = static_cast<int>(A_r.rows());
  if (N % 2 != 0 || A_r.cols() != N)
    throw std::invalid_argument("A_r must be square of even dimension");
  Eigen::MatrixXd Theta = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k < N / 2; ++k) {
    Theta(2 * k, 2 * k + 1) = 1.0;
    Theta(2 * k + 1, 2 * k) = -1.0;
  }
  return 0.25 * (-Theta * A_r + A_r.transpose() * Theta);
}

StateSpace convert_basis(const StateSpace& ss, BasisDirection direction) {
  ss.validate();
  const Eigen::MatrixXcd Un = basis_maps(ss.n).U;
  const Eigen::MatrixXcd Um = basis_maps(ss.m).U;
  StateSpace out = ss;
  if (direction == BasisDirection::kQuadratureToLadder) {
    out.A = Un * ss.A * Un.adjoint();
    out.B = Un * ss.B * Um.adjoint();
    out.C = Um * ss.C * Un.adjoint();
    out.D = Um * ss.D * Um.adjoint();
  } else {
    out.A = Un.adjoint() * ss.A * Un;
    out.B = Un.adjoint() * ss.B * Um;
    out.C = Um.adjoint() * ss.C * Un;
    out.D = Um.adjoint() * ss.D * Um;
  }
  return out;
}

std::vector<HamiltonianTerm> total_hamiltonian_terms(const GeneralizedOpenOscillator& goo) {
  goo.validate();
  // Keys order terms as (class, first index, second index) with classes:
  // 0 a^dag a, 1 a^dag a^dag, 2 a a, then the drive classes 3..6.
  std::map<std::tuple<int, int, int>, cdouble> acc;
  for (int p = 0; p < 2 * goo.n; ++p)
    for (int q = 0; q < 2 * goo.n; ++q) {
      const cdouble w = goo.Omega(p, q);
      if (w == cdouble(0.0)) continue;
      const int k = p / 2, l = q / 2;
      if (p % 2 == 0 && q % 2 == 0)
        acc[{0, k, l}] += w;
      else if (p % 2 == 0 && q % 2 == 1)
        acc[{1, std::min(k, l), std::max(k, l)}] += w;
      else if (p % 2 == 1 && q % 2 == 0)
        acc[{2, std::min(k, l), std::max(k, l)}] += w;
      else
        acc[{0, l, k}] += w;  // a_k a_l^dag reordered; identity shift dropped
    }
  const cdouble iu(0.0, 1.0);
  for (int j = 0; j < goo.m; ++j)
    for (int p = 0; p < 2 * goo.n; ++p) {
      const cdouble kv = goo.K(j, p);
      if (kv == cdouble(0.0)) continue;
      const int k = p / 2;
      if (p % 2 == 0) {
        acc[{3, k, j}] += iu * std::conj(kv);   // a_k^dag u_j
        acc[{4, k, j}] += -iu * kv;             // a_k u_j^dag
      } else {
        acc[{6, k, j}] += iu * std::conj(kv);   // a_k u_j
        acc[{5, k, j}] += -iu * kv;             // a_k^dag u_j^dag
      }
    }

  double scale = 1.0;
  for (const auto& [key, w] : acc) scale = std::max(scale, std::abs(w));

  std::vector<HamiltonianTerm> terms;
  for (const auto& [key, w] : acc) {
    if (std::abs(w) <= 1e-14 * scale) continue;
    const auto [cls, a, b] = key;
    HamiltonianTerm t;
    t.coefficient = w;
    t.kind = cls < 3 ? HamiltonianTerm::Kind::kInternal : HamiltonianTerm::Kind::kDrive;
    const std::string sa = "a" + std::to_string(a + 1);
    const std::string sb = cls < 3 ? "a" + std::to_string(b + 1) : "u" + std::to_string(b + 1);
    switch (cls) {
      case 0: t.expression = sa + "^dag " + sb; break;
      case 1: t.expression = sa + "^dag " + sb + "^dag"; break;
      case 2: t.expression = sa + " " + sb; break;
      case 3: t.expression = sa + "^dag " + sb; break;
      case 4: t.expression = sa + " " + sb + "^dag"; break;
      case 5: t.expression = sa + "^dag " + sb + "^dag"; break;
      default: t.expression = sa + " " + sb; break;
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

}  // namespace qfilt
