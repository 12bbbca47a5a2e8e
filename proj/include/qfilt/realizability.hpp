#pragma once

#include <vector>

#include "qfilt/statespace.hpp"

namespace qfilt {

// Residuals of the three physical-realizability identities
//   A J + J A^dag + B Jm B^dag = 0        (residual_dyn)
//   J C^dag + B Jm D^dag = 0              (residual_out)
//   D Jm D^dag = Jm                       (residual_feed)
// in Frobenius norm; pass iff all are below tol_rel * max(1, ||A||_F).
struct RealizabilityReport {
  double residual_dyn = 0.0;
  double residual_out = 0.0;
  double residual_feed = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

RealizabilityReport check_realizable(const StateSpace& ss, double tol_rel = 1e-9);

// Frequency-domain symplectic identity G(s^*)^dag Jm G(-s) = Jm sampled on
// the imaginary axis s = i*omega.  max_residual is the largest Frobenius
// defect over the grid; pass iff it stays below tol.
struct SymplecticReport {
  std::vector<double> residuals;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

SymplecticReport check_symplectic_tf(const RationalGrid& grid,
                                     const std::vector<double>& omegas,
                                     double tol = 1e-8);

// Feasibility conditions for restoring realizability by a state-space
// transformation: no eigenvalue pair of A with lambda_i + conj(lambda_j) = 0
// (eigen_ok), and a unitary feedthrough that already satisfies the
// symplectic identity (d_ok).
struct TransformConditions {
  double min_eigen_pair = 0.0;   // min_{i,j} |lambda_i + conj(lambda_j)|
  double eigen_pair_threshold = 0.0;
  double unitarity_defect = 0.0;       // ||D^dag D - I||_F
  double feedthrough_residual = 0.0;   // ||D Jm D^dag - Jm||_F
  bool eigen_ok = false;
  bool d_ok = false;
  bool feasible = false;
};

TransformConditions check_transform_conditions(const StateSpace& ss);

// Hermitian solution of A X + X A^dag + B Jm B^dag = 0 via the vectorized
// linear system, checked against the coupling identity X C^dag + B Jm D^dag
// = 0.  Throws ConditionError when the Sylvester operator is singular, X is
// not Hermitian to 1e-10, or the coupling residual exceeds 1e-8 (relative).
struct XSolution {
  Eigen::MatrixXcd X;
  double hermiticity_defect = 0.0;
  double coupling_residual = 0.0;
};

XSolution solve_X(const StateSpace& ss);

// Factor a nonsingular Hermitian X with inertia (n, n) as X = T J T^dag.
// Minus-type X (X = -pairswap(conj(X))pairswap) gets a structured factor
// whose columns come in conjugate pairs; anything else gets the generic
// eigenvalue-based factor V |Lambda|^{1/2} Pi.  T is not unique; only
// T J T^dag = X (verified to 1e-9 relative) and the realizability of the
// transformed system are contractual.
Eigen::MatrixXcd j_factorize(const Eigen::MatrixXcd& X);

// solve_X + j_factorize + similarity transform (T^-1 A T, T^-1 B, C T, D).
// The result is verified against check_realizable before being returned.
struct TransformResult {
  StateSpace system;
  Eigen::MatrixXcd T;
  Eigen::MatrixXcd X;
  RealizabilityReport report;
};

TransformResult transform_to_realizable(const StateSpace& ss);

// Doubled-up conjugation symmetry defects (relative Frobenius norms):
//   A = +pairswap conj(A) pairswap      B = -pairswap conj(B) pairswap_m
//   C = -pairswap_m conj(C) pairswap    D = +pairswap_m conj(D) pairswap_m
// Advisory only: realizability does not require it, so callers warn rather
// than fail.
struct DoubledUpSymmetry {
  double a_defect = 0.0;
  double b_defect = 0.0;
  double c_defect = 0.0;
  double d_defect = 0.0;
  double residual = 0.0;  // max of the four
  bool pass = false;
};

DoubledUpSymmetry check_doubled_up_symmetry(const StateSpace& ss, double tol = 1e-8);

}  // namespace qfilt
