#include "qfilt/realizability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qfilt/errors.hpp"

namespace qfilt {

namespace {

// Phase-fix an eigenvector: the largest-modulus entry (lowest index on ties)
// is rotated onto the positive real axis.  Keeps factorizations reproducible
// across eigensolver backends.
void fix_phase(Eigen::VectorXcd& v) {
  int best = 0;
  double mag = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > mag * (1.0 + 1e-12)) {
      mag = a;
      best = i;
    }
  }
  if (mag == 0.0) return;
  v *= std::conj(v(best)) / mag;
}

}  // namespace

RealizabilityReport check_realizable(const StateSpace& ss, double tol_rel) {
  ss.validate();
  const Eigen::MatrixXcd J = J_of(ss.n);
  const Eigen::MatrixXcd Jm = J_of(ss.m);
  RealizabilityReport rep;
  rep.residual_dyn = (ss.A * J + J * ss.A.adjoint() + ss.B * Jm * ss.B.adjoint()).norm();
  rep.residual_out = (J * ss.C.adjoint() + ss.B * Jm * ss.D.adjoint()).norm();
  rep.residual_feed = (ss.D * Jm * ss.D.adjoint() - Jm).norm();
  rep.threshold = tol_rel * std::max(1.0, ss.A.norm());
  rep.pass = rep.residual_dyn <= rep.threshold && rep.residual_out <= rep.threshold &&
             rep.residual_feed <= rep.threshold;
  return rep;
}

SymplecticReport check_symplectic_tf(const RationalGrid& grid,
                                     const std::vector<double>& omegas,
                                     double tol) {
  const int d = static_cast<int>(grid.size());
  if (d == 0 || d % 2 != 0) throw std::invalid_argument("grid must be 2m x 2m");
  const Eigen::MatrixXcd Jm = J_of(d / 2);
  SymplecticReport rep;
  rep.threshold = tol;
  rep.residuals.reserve(omegas.size());
  for (double w : omegas) {
    const cdouble s(0.0, w);
    const Eigen::MatrixXcd Gl = evaluate(grid, std::conj(s));
    const Eigen::MatrixXcd Gr = evaluate(grid, -s);
    rep.residuals.push_back((Gl.adjoint() * Jm * Gr - Jm).norm());
    rep.max_residual = std::max(rep.max_residual, rep.residuals.back());
  }
  rep.pass = !omegas.empty() && rep.max_residual <= tol;
  return rep;
}

TransformConditions check_transform_conditions(const StateSpace& ss) {
  ss.validate();
  const Eigen::MatrixXcd Jm = J_of(ss.m);
  TransformConditions tc;
  tc.eigen_pair_threshold = 1e-8 * std::max(1.0, ss.A.norm());
  if (ss.n > 0) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ss.A, false);
    const auto& ev = es.eigenvalues();
    tc.min_eigen_pair = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ev.size(); ++i)
      for (int j = 0; j < ev.size(); ++j)
        tc.min_eigen_pair = std::min(tc.min_eigen_pair, std::abs(ev(i) + std::conj(ev(j))));
  }
  tc.eigen_ok = ss.n == 0 || tc.min_eigen_pair > tc.eigen_pair_threshold;
  tc.unitarity_defect =
      (ss.D.adjoint() * ss.D - Eigen::MatrixXcd::Identity(2 * ss.m, 2 * ss.m)).norm();
  tc.feedthrough_residual = (ss.D * Jm * ss.D.adjoint() - Jm).norm();
  tc.d_ok = tc.unitarity_defect < 1e-10 && tc.feedthrough_residual < 1e-10;
  tc.feasible = tc.eigen_ok && tc.d_ok;
  return tc;
}

XSolution solve_X(const StateSpace& ss) {
  ss.validate();
  const int N = 2 * ss.n;
  const Eigen::MatrixXcd Jm = J_of(ss.m);
  XSolution sol;
  if (N == 0) {
    sol.X.resize(0, 0);
    return sol;
  }
  // Column-major vectorization: vec(A X + X A^dag) = (I (x) A + conj(A) (x) I) vec(X).
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(N * N, N * N);
  for (int j = 0; j < N; ++j)
    K.block(j * N, j * N, N, N) += ss.A;
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      K.block(j * N, k * N, N, N).diagonal().array() += std::conj(ss.A(j, k));
  const Eigen::MatrixXcd Q = -(ss.B * Jm * ss.B.adjoint());
  Eigen::VectorXcd rhs(N * N);
  for (int j = 0; j < N; ++j) rhs.segment(j * N, N) = Q.col(j);

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(K);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible())
    throw ConditionError("eigenvalue pair condition",
                         "the drift matrix has an eigenvalue pair summing to zero; the "
                         "storage equation is singular");
  const Eigen::VectorXcd xv = lu.solve(rhs);
  Eigen::MatrixXcd X(N, N);
  for (int j = 0; j < N; ++j) X.col(j) = xv.segment(j * N, N);

  const double scale = std::max(1.0, X.norm());
  sol.hermiticity_defect = (X - X.adjoint()).norm();
  if (sol.hermiticity_defect > 1e-10 * scale)
    throw ConditionError("hermiticity",
                         "storage candidate is not Hermitian within tolerance");
  X = 0.5 * (X + X.adjoint()).eval();
  sol.coupling_residual = (X * ss.C.adjoint() + ss.B * Jm * ss.D.adjoint()).norm();
  const double cscale = std::max(1.0, ss.C.norm() * scale);
  if (sol.coupling_residual > 1e-8 * cscale)
    throw ConditionError("coupling compatibility",
                         "storage solution does not satisfy the coupling identity; the "
                         "transfer matrix is not symplectic or the model is not minimal");
  sol.X = std::move(X);
  return sol;
}

Eigen::MatrixXcd j_factorize(const Eigen::MatrixXcd& X) {
  const int N = static_cast<int>(X.rows());
  if (N == 0 || N % 2 != 0 || X.cols() != N)
    throw std::invalid_argument("X must be square of even dimension");
  const double xnorm = std::max(1.0, X.norm());
  if ((X - X.adjoint()).norm() > 1e-10 * xnorm)
    throw std::invalid_argument("X must be Hermitian");
  const int n = N / 2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  int neg = 0, pos = 0;
  for (int i = 0; i < N; ++i) {
    if (std::abs(ev(i)) <= 1e-10 * xnorm)
      throw ConditionError("storage nonsingularity",
                           "storage matrix is singular or nearly singular");
    (ev(i) > 0 ? pos : neg) += 1;
  }
  if (pos != n || neg != n)
    throw ConditionError("storage inertia",
                         "storage matrix must have n positive and n negative eigenvalues");

  const Eigen::MatrixXcd L = pair_swap(n);
  const Eigen::MatrixXcd J = J_of(n);
  Eigen::MatrixXcd T(N, N);

  const bool minus_type = (X + L * X.conjugate() * L).norm() <= 1e-8 * xnorm;
  if (minus_type) {
    // For minus-type X the negative eigenpairs are the pair-swapped
    // conjugates of the positive ones, so each positive pair (lambda, v)
    // yields the column pair (sqrt(lambda) v, -sqrt(lambda) pairswap conj(v)).
    int k = 0;
    for (int i = 0; i < N; ++i) {
      if (ev(i) <= 0) continue;
      Eigen::VectorXcd v = es.eigenvectors().col(i);
      fix_phase(v);
      const double r = std::sqrt(ev(i));
      T.col(2 * k) = r * v;
      T.col(2 * k + 1) = -r * (L * v.conjugate());
      ++k;
    }
  } else {
    int k_pos = 0, k_neg = 0;
    for (int i = 0; i < N; ++i) {
      Eigen::VectorXcd v = es.eigenvectors().col(i);
      fix_phase(v);
      const double r = std::sqrt(std::abs(ev(i)));
      if (ev(i) > 0)
        T.col(2 * (k_pos++)) = r * v;
      else
        T.col(2 * (k_neg++) + 1) = r * v;
    }
  }

  if ((T * J * T.adjoint() - X).norm() > 1e-9 * xnorm)
    throw ConditionError("factorization verification",
                         "T J T^dag does not reproduce the storage matrix");
  return T;
}

TransformResult transform_to_realizable(const StateSpace& ss) {
  TransformResult out;
  XSolution sol = solve_X(ss);
  out.X = sol.X;
  out.system = ss;
  if (ss.n > 0) {
    out.T = j_factorize(sol.X);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(out.T);
    out.system.A = lu.solve(ss.A * out.T);
    out.system.B = lu.solve(ss.B);
    out.system.C = ss.C * out.T;
  } else {
    out.T.resize(0, 0);
  }
  out.report = check_realizable(out.system, 1e-8);
  if (!out.report.pass)
    throw ConditionError("transform verification",
                         "transformed system fails the realizability identities");
  return out;
}

DoubledUpSymmetry check_doubled_up_symmetry(const StateSpace& ss, double tol) {
  ss.validate();
  const Eigen::MatrixXcd Ln = pair_swap(ss.n);
  const Eigen::MatrixXcd Lm = pair_swap(ss.m);
  auto rel = [](double x, const Eigen::MatrixXcd& M) {
    return x / std::max(1.0, M.norm());
  };
  DoubledUpSymmetry rep;
  rep.a_defect = rel((ss.A - Ln * ss.A.conjugate() * Ln).norm(), ss.A);
  rep.b_defect = rel((ss.B + Ln * ss.B.conjugate() * Lm).norm(), ss.B);
  rep.c_defect = rel((ss.C + Lm * ss.C.conjugate() * Ln).norm(), ss.C);
  rep.d_defect = rel((ss.D - Lm * ss.D.conjugate() * Lm).norm(), ss.D);
  rep.residual = std::max(std::max(rep.a_defect, rep.b_defect),
                          std::max(rep.c_defect, rep.d_defect));
  rep.pass = rep.residual <= tol;
  return rep;
}

}  // namespace qfilt
