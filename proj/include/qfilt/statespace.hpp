#pragma once

#include <Eigen/Dense>
#include <optional>

#include "qfilt/transfer_matrix.hpp"

namespace qfilt {

// Scale record attached to a state space after normalization, so the inverse
// map is unambiguous.
struct ScaleRecord {
  double s0 = 0.0;
  bool dimensionless = false;
};

// Doubled-up state space under the sign convention
//   G(s) = C (-sI - A)^{-1} B + D
// with the Laplace transform defined with e^{+st}.  State vector is
// interleaved (a_1, a_1^dag, a_2, a_2^dag, ...), likewise the 2m channels.
struct StateSpace {
  int n = 0;  // mode count: A is 2n x 2n
  int m = 0;  // channel count: D is 2m x 2m
  Eigen::MatrixXcd A, B, C, D;
  std::optional<ScaleRecord> scale;

  static StateSpace sized(int n, int m);

  // Shape and finiteness validation; throws std::invalid_argument.
  void validate() const;
};

// diag(1, -1, 1, -1, ...) of size 2k.
Eigen::MatrixXcd J_of(int k);

// Pair-swap permutation blockdiag([[0,1],[1,0]]) of size 2k.
Eigen::MatrixXcd pair_swap(int k);

// Minimal realization of a proper 2m x 2m rational grid.  Residue-based
// construction when every entry has simple poles; repeated poles fall back to
// per-column companion blocks plus a two-sided minimality reduction.
// Conjugate pole pairs are kept adjacent so realizations of conjugate-
// symmetric grids inherit the doubled-up pair structure.
StateSpace tf_to_minimal_ss(const RationalGrid& grid);

// Transfer matrix value at a single frequency.  Throws SingularityError when
// s is within 1e-10 of an eigenvalue of -A.
Eigen::MatrixXcd ss_to_tf(const StateSpace& ss, cdouble s);

struct MinimalityReport {
  int controllable_rank = 0;
  int observable_rank = 0;
  int state_dim = 0;
  bool minimal = false;
};

// Rank tests on the controllability/observability matrices with singular
// values thresholded at 1e-10 times the largest.
MinimalityReport minimality_report(const StateSpace& ss);

// Removes uncontrollable then unobservable directions via orthonormal
// projections; transfer function is preserved.
StateSpace reduce_to_minimal(const StateSpace& ss);

// Dimensionless form: A *= 2/s0, B and C *= sqrt(2/s0), D unchanged; attaches
// the scale record.  Throws if already normalized.
StateSpace normalize(const StateSpace& ss, double s0);

// Inverse of normalize; requires the scale record.
StateSpace denormalize(const StateSpace& ss);

}  // namespace qfilt
