#include "qfilt/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qfilt/errors.hpp"

namespace qfilt {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kClusterTol = 1e-7;
// Computed roots of a q-fold denominator root scatter like eps^(1/q), which is
// ~5e-6 already for q = 3.  Any same-entry pair closer than this is treated as
// a repeated root and routed through the companion construction, which works
// from the exact coefficients and never needs to separate the roots.
constexpr double kRepeatedRootTol = 1e-4;

// Quadrature <-> ladder map per channel pair, blockdiag of (1/sqrt2)[[1,i],[1,-i]].
Eigen::MatrixXcd u_pairs(int pairs) {
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(2 * pairs, 2 * pairs);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < pairs; ++k) {
    U(2 * k, 2 * k) = r;
    U(2 * k, 2 * k + 1) = cdouble(0.0, r);
    U(2 * k + 1, 2 * k) = r;
    U(2 * k + 1, 2 * k + 1) = cdouble(0.0, -r);
  }
  return U;
}

int svd_rank(const Eigen::VectorXd& sv, double tol_rel) {
  if (sv.size() == 0) return 0;
  const double cut = tol_rel * sv(0);
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

struct Factorization {
  Eigen::MatrixXcd C;  // 2m x r
  Eigen::MatrixXcd B;  // r x 2m
  bool paired_structure = false;  // internal indices form conjugate pairs
};

// Rank factorization R = C*B.  Full-rank residues split as (R, I) so exact
// diagonal cases stay exactly diagonal.  Rank-deficient self-conjugate
// residues of even rank are factored through the real quadrature picture so
// the factors keep the conjugate pair structure.
Factorization factor_residue(const Eigen::MatrixXcd& R, bool self_conjugate) {
  const int d = static_cast<int>(R.rows());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int r = svd_rank(svd.singularValues(), kRankTol);
  Factorization f;
  if (r == d) {
    f.C = R;
    f.B = Eigen::MatrixXcd::Identity(d, d);
    f.paired_structure = self_conjugate;
    return f;
  }
  if (self_conjugate && r % 2 == 0 && r > 0) {
    const Eigen::MatrixXcd U = u_pairs(d / 2);
    const Eigen::MatrixXcd Rq_c = U.adjoint() * R * U;
    if (Rq_c.imag().norm() <= 1e-9 * std::max(1.0, R.norm())) {
      const Eigen::MatrixXd Rq = Rq_c.real();
      Eigen::JacobiSVD<Eigen::MatrixXd> rsvd(Rq, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const int rr = svd_rank(rsvd.singularValues(), kRankTol);
      if (rr == r) {
        const Eigen::MatrixXd Cq = rsvd.matrixU().leftCols(r) *
                                   rsvd.singularValues().head(r).asDiagonal();
        const Eigen::MatrixXd Bq = rsvd.matrixV().leftCols(r).transpose();
        const Eigen::MatrixXcd Ui = u_pairs(r / 2);
        f.C = U * Cq * Ui.adjoint();
        f.B = Ui * Bq * U.adjoint();
        f.paired_structure = true;
        return f;
      }
    }
  }
  f.C = svd.matrixU().leftCols(r) *
        svd.singularValues().head(r).cast<cdouble>().asDiagonal();
  f.B = svd.matrixV().leftCols(r).adjoint();
  f.paired_structure = false;
  return f;
}

struct PoleCluster {
  cdouble rep;
  Eigen::MatrixXcd residue;
  bool processed = false;
};

Eigen::MatrixXcd ctrb_matrix(const StateSpace& ss) {
  const int N = static_cast<int>(ss.A.rows());
  if (N == 0) return Eigen::MatrixXcd(0, 0);
  const int cols = static_cast<int>(ss.B.cols());
  Eigen::MatrixXcd K(N, N * cols);
  Eigen::MatrixXcd blk = ss.B;
  for (int k = 0; k < N; ++k) {
    K.middleCols(k * cols, cols) = blk;
    blk = ss.A * blk;
  }
  return K;
}

Eigen::MatrixXcd obsv_matrix(const StateSpace& ss) {
  const int N = static_cast<int>(ss.A.rows());
  if (N == 0) return Eigen::MatrixXcd(0, 0);
  const int rows = static_cast<int>(ss.C.rows());
  Eigen::MatrixXcd O(N * rows, N);
  Eigen::MatrixXcd blk = ss.C;
  for (int k = 0; k < N; ++k) {
    O.middleRows(k * rows, rows) = blk;
    blk = blk * ss.A;
  }
  return O;
}

// Dimension of the controllable subspace of (A, B) by unitary staircase
// compression.  Each rank decision looks at a single coupling block of A (or
// B itself), never at Krylov powers, so the test stays well conditioned even
// when the pole magnitudes would make [B, AB, A^2 B, ...] numerically useless.
// If Qout is non-null it receives the accumulated unitary; its leading columns
// span the controllable subspace.
int staircase_dim(Eigen::MatrixXcd A, Eigen::MatrixXcd B, Eigen::MatrixXcd* Qout) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Identity(n, n);
  const double scale = std::max({1.0, A.norm(), B.norm()});
  int done = 0;
  int prev = 0;  // width of the newest completed stair
  bool first = true;
  while (done < n) {
    const int rem = n - done;
    const Eigen::MatrixXcd W =
        first ? Eigen::MatrixXcd(B) : Eigen::MatrixXcd(A.block(done, done - prev, rem, prev));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(W, Eigen::ComputeFullU);
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > kRankTol * scale) ++r;
    if (r == 0) break;
    const Eigen::MatrixXcd U = svd.matrixU();
    A.block(done, 0, rem, n) = (U.adjoint() * A.block(done, 0, rem, n)).eval();
    A.block(0, done, n, rem) = (A.block(0, done, n, rem) * U).eval();
    if (first) B = (U.adjoint() * B).eval();
    Q.middleCols(done, rem) = (Q.middleCols(done, rem) * U).eval();
    done += r;
    prev = r;
    first = false;
  }
  if (Qout) *Qout = Q;
  return done;
}

bool minimal_by_staircase(const StateSpace& ss) {
  const int N = static_cast<int>(ss.A.rows());
  return staircase_dim(ss.A, ss.B, nullptr) == N &&
         staircase_dim(ss.A.adjoint(), ss.C.adjoint(), nullptr) == N;
}

// Polynomial LCM, always returned monic (the companion realization below
// depends on that).
Poly poly_lcm(const Poly& a, const Poly& b) {
  auto monic = [](const Poly& p) {
    const Poly t = poly::trim(p);
    return poly::scale(t, cdouble(1.0) / t.back());
  };
  if (poly::degree(a) < 1) return poly::degree(b) < 1 ? Poly{1.0} : monic(b);
  if (poly::degree(b) < 1) return monic(a);
  Poly g = poly::gcd(a, b);
  Poly q, r;
  poly::divmod(a, g, q, r);
  return monic(poly::mul(q, b));
}

cdouble feedthrough_entry(const RationalFunction& e) {
  const int dn = poly::degree(e.num);
  const int dd = poly::degree(e.den);
  if (dn < 0 || dn < dd) return 0.0;
  return poly::trim(e.num).back() / poly::trim(e.den).back();
}

StateSpace realize_fallback(const RationalGrid& grid, const Eigen::MatrixXcd& D);

}  // namespace

StateSpace StateSpace::sized(int n_, int m_) {
  StateSpace ss;
  ss.n = n_;
  ss.m = m_;
  ss.A = Eigen::MatrixXcd::Zero(2 * n_, 2 * n_);
  ss.B = Eigen::MatrixXcd::Zero(2 * n_, 2 * m_);
  ss.C = Eigen::MatrixXcd::Zero(2 * m_, 2 * n_);
  ss.D = Eigen::MatrixXcd::Zero(2 * m_, 2 * m_);
  return ss;
}

void StateSpace::validate() const {
  if (n < 0 || m <= 0) throw std::invalid_argument("state space with n < 0 or m <= 0");
  auto dims = [](const Eigen::MatrixXcd& M, int r, int c, const char* name) {
    if (M.rows() != r || M.cols() != c)
      throw std::invalid_argument(std::string("matrix ") + name + " has wrong shape");
    if (!M.allFinite())
      throw std::invalid_argument(std::string("matrix ") + name + " has non-finite entries");
  };
  dims(A, 2 * n, 2 * n, "A");
  dims(B, 2 * n, 2 * m, "B");
  dims(C, 2 * m, 2 * n, "C");
  dims(D, 2 * m, 2 * m, "D");
}

Eigen::MatrixXcd J_of(int k) {
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    J(2 * i, 2 * i) = 1.0;
    J(2 * i + 1, 2 * i + 1) = -1.0;
  }
  return J;
}

Eigen::MatrixXcd pair_swap(int k) {
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    L(2 * i, 2 * i + 1) = 1.0;
    L(2 * i + 1, 2 * i) = 1.0;
  }
  return L;
}

StateSpace tf_to_minimal_ss(const RationalGrid& grid) {
  const int d = static_cast<int>(grid.size());
  if (d == 0 || d % 2 != 0) throw std::invalid_argument("grid must be 2m x 2m");
  for (const auto& row : grid)
    if (static_cast<int>(row.size()) != d) throw std::invalid_argument("grid must be square");
  const int m = d / 2;

  Eigen::MatrixXcd D(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const RationalFunction& e = grid[size_t(i)][size_t(j)];
      if (!e.proper())
        throw std::invalid_argument("improper entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      D(i, j) = feedthrough_entry(e);
    }

  // Work in w = -s, where G(s) = C(wI - A)^{-1}B + D is the classical form.
  struct EntryPoles {
    std::vector<cdouble> roots;
    RationalFunction gw;  // entry as a function of w
  };
  std::vector<std::vector<EntryPoles>> ew(static_cast<size_t>(d),
                                          std::vector<EntryPoles>(static_cast<size_t>(d)));
  bool simple = true;
  for (int i = 0; i < d && simple; ++i)
    for (int j = 0; j < d && simple; ++j) {
      EntryPoles& ep = ew[size_t(i)][size_t(j)];
      ep.gw = grid[size_t(i)][size_t(j)].flip_variable();
      if (ep.gw.is_zero()) continue;
      ep.roots = poly::roots(ep.gw.den);
      for (size_t a = 0; a + 1 < ep.roots.size(); ++a)
        for (size_t b = a + 1; b < ep.roots.size(); ++b) {
          const double sc = std::max(1.0, std::abs(ep.roots[a]));
          if (std::abs(ep.roots[a] - ep.roots[b]) < kRepeatedRootTol * sc) simple = false;
        }
    }

  if (!simple) return realize_fallback(grid, D);

  // Cluster poles across entries and accumulate residue matrices.
  std::vector<PoleCluster> clusters;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const EntryPoles& ep = ew[size_t(i)][size_t(j)];
      if (ep.gw.is_zero()) continue;
      const Poly dnum = ep.gw.num;
      const Poly dden = ep.gw.den;
      const Poly dprime = poly::derivative(dden);
      for (const cdouble& p : ep.roots) {
        const cdouble res = poly::eval(dnum, p) / poly::eval(dprime, p);
        const double sc = std::max(1.0, std::abs(p));
        PoleCluster* home = nullptr;
        for (auto& cl : clusters)
          if (std::abs(cl.rep - p) < kClusterTol * sc) {
            home = &cl;
            break;
          }
        if (!home) {
          clusters.push_back({p, Eigen::MatrixXcd::Zero(d, d), false});
          home = &clusters.back();
        }
        home->residue(i, j) += res;
      }
    }

  // Deterministic processing order.
  std::sort(clusters.begin(), clusters.end(), [](const PoleCluster& x, const PoleCluster& y) {
    if (x.rep.real() != y.rep.real()) return x.rep.real() < y.rep.real();
    return std::abs(x.rep.imag()) != std::abs(y.rep.imag())
               ? std::abs(x.rep.imag()) < std::abs(y.rep.imag())
               : x.rep.imag() > y.rep.imag();
  });

  const Eigen::MatrixXcd Lm = pair_swap(m);
  struct Block {
    std::vector<cdouble> a_diag;
    Eigen::MatrixXcd B;  // r x 2m
    Eigen::MatrixXcd C;  // 2m x r
  };
  std::vector<Block> blocks;

  auto self_conj_residue = [&](const Eigen::MatrixXcd& R) {
    return (R - Lm * R.conjugate() * Lm).norm() <= 1e-8 * std::max(1.0, R.norm());
  };

  double res_scale = 0.0;
  for (const auto& cl : clusters) res_scale = std::max(res_scale, cl.residue.norm());

  for (auto& cl : clusters) {
    if (cl.processed) continue;
    cl.processed = true;
    const double sc = std::max(1.0, std::abs(cl.rep));
    // A pole every entry cancelled leaves no residue and no state.
    if (cl.residue.norm() <= 1e-12 * std::max(1.0, res_scale)) continue;

    const bool is_real = std::abs(cl.rep.imag()) <= kClusterTol * sc;
    if (is_real) {
      const cdouble p(cl.rep.real(), 0.0);
      Factorization f = factor_residue(cl.residue, self_conj_residue(cl.residue));
      Block blk;
      blk.a_diag.assign(size_t(f.B.rows()), p);
      blk.B = f.B;
      blk.C = f.C;
      blocks.push_back(std::move(blk));
      continue;
    }

    // Complex pole: look for the conjugate partner cluster.
    PoleCluster* partner = nullptr;
    for (auto& other : clusters) {
      if (&other == &cl || other.processed) continue;
      if (std::abs(other.rep - std::conj(cl.rep)) < kClusterTol * sc) {
        partner = &other;
        break;
      }
    }
    const bool conj_pairable =
        partner != nullptr &&
        (partner->residue - Lm * cl.residue.conjugate() * Lm).norm() <=
            1e-8 * std::max(1.0, cl.residue.norm());
    if (conj_pairable) {
      partner->processed = true;
      Factorization f = factor_residue(cl.residue, false);
      const int r = static_cast<int>(f.B.rows());
      const Eigen::MatrixXcd Cp = Lm * f.C.conjugate();          // partner output factor
      const Eigen::MatrixXcd Bp = f.B.conjugate() * Lm;          // partner input factor
      Block blk;
      blk.a_diag.resize(size_t(2 * r));
      blk.B.resize(2 * r, d);
      blk.C.resize(d, 2 * r);
      for (int k = 0; k < r; ++k) {
        blk.a_diag[size_t(2 * k)] = cl.rep;
        blk.a_diag[size_t(2 * k + 1)] = partner->rep;
        blk.B.row(2 * k) = f.B.row(k);
        blk.B.row(2 * k + 1) = Bp.row(k);
        blk.C.col(2 * k) = f.C.col(k);
        blk.C.col(2 * k + 1) = Cp.col(k);
      }
      blocks.push_back(std::move(blk));
    } else {
      Factorization f = factor_residue(cl.residue, false);
      Block blk;
      blk.a_diag.assign(size_t(f.B.rows()), cl.rep);
      blk.B = f.B;
      blk.C = f.C;
      blocks.push_back(std::move(blk));
    }
  }

  int N = 0;
  for (const auto& b : blocks) N += static_cast<int>(b.a_diag.size());
  if (N % 2 != 0)
    throw ConditionError("odd-state-dimension",
                         "minimal realization has odd state dimension; grid lacks the "
                         "doubled-up conjugate structure");

  StateSpace ss = StateSpace::sized(N / 2, m);
  ss.D = D;
  int at = 0;
  for (const auto& b : blocks) {
    const int r = static_cast<int>(b.a_diag.size());
    for (int k = 0; k < r; ++k) ss.A(at + k, at + k) = b.a_diag[size_t(k)];
    ss.B.middleRows(at, r) = b.B;
    ss.C.middleCols(at, r) = b.C;
    at += r;
  }

  if (!minimal_by_staircase(ss))
    throw ConditionError("minimality",
                         "residue construction produced a non-minimal realization "
                         "(tolerance-ambiguous ranks)");
  return ss;
}

namespace {

StateSpace realize_fallback(const RationalGrid& grid, const Eigen::MatrixXcd& D) {
  const int d = static_cast<int>(grid.size());
  const int m = d / 2;

  // Per-column controllable companion blocks over the column's common
  // denominator, in the w = -s variable.
  std::vector<Eigen::MatrixXcd> Ablocks;
  std::vector<int> col_of_block;
  std::vector<Eigen::MatrixXcd> Cblocks;
  int N = 0;
  for (int j = 0; j < d; ++j) {
    Poly dj{1.0};
    for (int i = 0; i < d; ++i) {
      const RationalFunction gw = grid[size_t(i)][size_t(j)].flip_variable();
      if (!gw.is_zero()) dj = poly_lcm(dj, gw.den);
    }
    const int k = poly::degree(dj);
    if (k < 1) continue;
    // Strictly proper numerators over the common denominator.
    Eigen::MatrixXcd Cj = Eigen::MatrixXcd::Zero(d, k);
    for (int i = 0; i < d; ++i) {
      RationalFunction gw = grid[size_t(i)][size_t(j)].flip_variable();
      if (gw.is_zero()) continue;
      Poly sp_num = poly::sub(gw.num, poly::scale(gw.den, D(i, j)));
      Poly q, r;
      poly::divmod(dj, gw.den, q, r);  // multiplier up to the common denominator
      Poly nij = poly::mul(sp_num, q);
      nij = poly::trim(nij);
      for (int t = 0; t < k && t < static_cast<int>(nij.size()); ++t) Cj(i, t) = nij[size_t(t)];
    }
    Eigen::MatrixXcd Aj = Eigen::MatrixXcd::Zero(k, k);
    for (int t = 0; t + 1 < k; ++t) Aj(t, t + 1) = 1.0;
    const cdouble lead = poly::trim(dj).back();
    for (int t = 0; t < k; ++t) Aj(k - 1, t) = -dj[size_t(t)] / lead;
    Ablocks.push_back(Aj);
    col_of_block.push_back(j);
    Cblocks.push_back(Cj);
    N += k;
  }

  StateSpace big;
  big.m = m;
  big.n = 0;  // set after reduction
  big.A = Eigen::MatrixXcd::Zero(N, N);
  big.B = Eigen::MatrixXcd::Zero(N, d);
  big.C = Eigen::MatrixXcd::Zero(d, N);
  big.D = D;
  int at = 0;
  for (size_t bi = 0; bi < Ablocks.size(); ++bi) {
    const int k = static_cast<int>(Ablocks[bi].rows());
    big.A.block(at, at, k, k) = Ablocks[bi];
    big.B(at + k - 1, col_of_block[bi]) = 1.0;
    big.C.middleCols(at, k) = Cblocks[bi];
    at += k;
  }

  StateSpace red = reduce_to_minimal(big);
  if (static_cast<int>(red.A.rows()) % 2 != 0)
    throw ConditionError("odd-state-dimension",
                         "minimal realization has odd state dimension; grid lacks the "
                         "doubled-up conjugate structure");
  red.n = static_cast<int>(red.A.rows()) / 2;
  red.m = m;
  if (!minimal_by_staircase(red))
    throw ConditionError("minimality",
                         "companion construction failed to reduce to a minimal realization "
                         "(tolerance-ambiguous ranks)");
  return red;
}

}  // namespace

Eigen::MatrixXcd ss_to_tf(const StateSpace& ss, cdouble s) {
  const int N = static_cast<int>(ss.A.rows());
  if (N == 0) return ss.D;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ss.A, false);
  const double scale = std::max(1.0, ss.A.norm());
  for (int i = 0; i < N; ++i)
    if (std::abs(s + es.eigenvalues()(i)) < 1e-10 * scale)
      throw SingularityError("transfer evaluation at a system pole (s = " +
                             std::to_string(s.real()) + (s.imag() < 0 ? "-" : "+") +
                             std::to_string(std::abs(s.imag())) + "i)");
  Eigen::MatrixXcd M = -s * Eigen::MatrixXcd::Identity(N, N) - ss.A;
  return ss.C * M.partialPivLu().solve(ss.B) + ss.D;
}

MinimalityReport minimality_report(const StateSpace& ss) {
  MinimalityReport rep;
  rep.state_dim = static_cast<int>(ss.A.rows());
  if (rep.state_dim == 0) {
    rep.minimal = true;
    return rep;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> sc(ctrb_matrix(ss));
  Eigen::JacobiSVD<Eigen::MatrixXcd> so(obsv_matrix(ss));
  rep.controllable_rank = svd_rank(sc.singularValues(), kRankTol);
  rep.observable_rank = svd_rank(so.singularValues(), kRankTol);
  rep.minimal =
      rep.controllable_rank == rep.state_dim && rep.observable_rank == rep.state_dim;
  return rep;
}

StateSpace reduce_to_minimal(const StateSpace& ss) {
  StateSpace cur = ss;
  // Controllable subspace is A-invariant and contains range(B); restricting to
  // it keeps the transfer function.
  {
    const int N = static_cast<int>(cur.A.rows());
    if (N > 0) {
      Eigen::MatrixXcd Q;
      const int r = staircase_dim(cur.A, cur.B, &Q);
      if (r < N) {
        const Eigen::MatrixXcd Q1 = Q.leftCols(r);
        cur.A = (Q1.adjoint() * cur.A * Q1).eval();
        cur.B = (Q1.adjoint() * cur.B).eval();
        cur.C = (cur.C * Q1).eval();
      }
    }
  }
  // Unobservable subspace is A-invariant and in ker(C); projecting onto its
  // orthogonal complement (the controllable subspace of the adjoint pair)
  // keeps the transfer function.
  {
    const int N = static_cast<int>(cur.A.rows());
    if (N > 0) {
      Eigen::MatrixXcd Q;
      const int r = staircase_dim(cur.A.adjoint(), cur.C.adjoint(), &Q);
      if (r < N) {
        const Eigen::MatrixXcd Q1 = Q.leftCols(r);
        cur.A = (Q1.adjoint() * cur.A * Q1).eval();
        cur.B = (Q1.adjoint() * cur.B).eval();
        cur.C = (cur.C * Q1).eval();
      }
    }
  }
  cur.n = static_cast<int>(cur.A.rows()) / 2;
  return cur;
}

StateSpace normalize(const StateSpace& ss, double s0) {
  if (s0 <= 0.0) throw std::invalid_argument("reference rate must be positive");
  if (ss.scale && ss.scale->dimensionless)
    throw ConditionError("double-normalization", "state space is already dimensionless");
  StateSpace out = ss;
  const double a = 2.0 / s0;
  const double bc = std::sqrt(2.0 / s0);
  out.A *= a;
  out.B *= bc;
  out.C *= bc;
  out.scale = ScaleRecord{s0, true};
  return out;
}

StateSpace denormalize(const StateSpace& ss) {
  if (!ss.scale || !ss.scale->dimensionless)
    throw ConditionError("missing-scale", "state space carries no normalization record");
  StateSpace out = ss;
  const double s0 = ss.scale->s0;
  out.A *= s0 / 2.0;
  out.B *= std::sqrt(s0 / 2.0);
  out.C *= std::sqrt(s0 / 2.0);
  out.scale.reset();
  return out;
}

}  // namespace qfilt
