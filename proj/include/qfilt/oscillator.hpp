#pragma once

#include <string>
#include <vector>

#include "qfilt/statespace.hpp"

namespace qfilt {

// (S, L, H) description of a linear open quantum system: scattering matrix S,
// coupling L = K x, Hamiltonian H = hbar x^dag Omega x, with x the
// interleaved (a_1, a_1^dag, ...) vector.  Omega carries all numeric factors;
// hbar stays symbolic in reports.
struct GeneralizedOpenOscillator {
  int n = 0;  // modes
  int m = 0;  // channels
  Eigen::MatrixXcd S;      // m x m
  Eigen::MatrixXcd K;      // m x 2n
  Eigen::MatrixXcd Omega;  // 2n x 2n Hermitian

  static GeneralizedOpenOscillator sized(int n, int m);
  void validate() const;
};

// Constant matrices tying the interleaved ladder basis to the grouped real
// quadrature basis: x = U x_r, Theta = blockdiag([[0,1],[-1,0]]), and the
// permutation P mapping interleaved to grouped component order.
struct BasisMaps {
  Eigen::MatrixXcd U;      // 2n x 2n unitary
  Eigen::MatrixXcd Theta;  // 2n x 2n real block rotation
  Eigen::MatrixXcd P;      // 2n x 2n permutation, grouped = P * interleaved
};

BasisMaps basis_maps(int n);

// Oscillator parameters of a physically realizable state space:
//   S from the odd-index block of D, K from the annihilation rows of C,
//   Omega = (i/4)(J A - A^dag J) symmetrized.
// Throws ConditionError when the realizability residuals are too large or D
// is not unitary symplectic.
GeneralizedOpenOscillator extract_slh(const StateSpace& ss);

// Inverse construction: state space generated by the oscillator,
//   D = doubled-up S, C rows (K_k; -conj(K_k) pairswap),
//   B = -J C^dag Jm D, A = -2i J Omega - (1/2) J C^dag Jm C.
// The output satisfies the realizability identities by construction.
StateSpace slh_to_ss(const GeneralizedOpenOscillator& goo);

// Hamiltonian coefficient matrix from a real quadrature-basis drift matrix:
// Omega_r = (1/4)(-Theta A_r + A_r^T Theta).
Eigen::MatrixXd hamiltonian_matrix_quadrature(const Eigen::MatrixXd& A_r);

enum class BasisDirection { kQuadratureToLadder, kLadderToQuadrature };

// Conjugate by the basis unitaries on state and channel sides:
// quadrature -> ladder maps A_r to U A_r U^dag, B_r to U_n B_r U_m^dag, and
// so on.  Involutive composition returns the original system.
StateSpace convert_basis(const StateSpace& ss, BasisDirection direction);

// One term of the total Hamiltonian H_tot = H + i hbar (L^dag u - L^T u^dag),
// normal-ordered, with constant (identity-operator) shifts dropped.  The
// expression uses a1, a2, ... for modes and u1, u2, ... for input channels,
// with ^dag marking adjoints.
struct HamiltonianTerm {
  enum class Kind { kInternal, kDrive };
  Kind kind = Kind::kInternal;
  std::string expression;
  cdouble coefficient;  // in rate units; multiply by hbar for energy
};

std::vector<HamiltonianTerm> total_hamiltonian_terms(const GeneralizedOpenOscillator& goo);

}  // namespace qfilt
