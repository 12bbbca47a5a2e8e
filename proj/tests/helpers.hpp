#pragma once
// Shared generators and comparison helpers for the test binaries.
#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <random>

#include "qfilt/oscillator.hpp"
#include "qfilt/statespace.hpp"

namespace testutil {

using qfilt::cdouble;

inline Eigen::MatrixXcd random_complex(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = cdouble(g(rng), g(rng));
  return M;
}

inline Eigen::MatrixXcd random_unitary(int k, std::mt19937_64& rng) {
  const Eigen::MatrixXcd M = random_complex(k, k, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M);
  Eigen::MatrixXcd Q = qr.householderQ();
  const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the column phases so the distribution does not favor R's sign choices
  for (int i = 0; i < k; ++i) {
    const cdouble d = R(i, i);
    if (std::abs(d) > 0) Q.col(i) *= d / std::abs(d);
  }
  return Q;
}

// Hermitian and pair-swap symmetric, so x^dag Omega x is a legal Hamiltonian
// for the interleaved doubled-up vector.
inline Eigen::MatrixXcd random_hamiltonian(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd H = random_complex(2 * n, 2 * n, rng);
  H = (0.5 * (H + H.adjoint())).eval();
  const Eigen::MatrixXcd L = qfilt::pair_swap(n);
  return 0.5 * (H + L * H.conjugate() * L);
}

inline qfilt::GeneralizedOpenOscillator random_goo(int n, int m, std::mt19937_64& rng) {
  qfilt::GeneralizedOpenOscillator goo = qfilt::GeneralizedOpenOscillator::sized(n, m);
  goo.S = random_unitary(m, rng);
  goo.K = random_complex(m, 2 * n, rng);
  goo.Omega = random_hamiltonian(n, rng);
  return goo;
}

// Invertible with singular values clamped to [0.5, 2].
inline Eigen::MatrixXcd random_well_conditioned(int k, std::mt19937_64& rng) {
  const Eigen::MatrixXcd M = random_complex(k, k, rng);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues();
  for (int i = 0; i < k; ++i) s(i) = std::clamp(s(i), 0.5, 2.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

inline double rel_err(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

}  // namespace testutil
