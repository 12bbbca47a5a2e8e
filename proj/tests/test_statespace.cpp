#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qfilt/errors.hpp"
#include "qfilt/statespace.hpp"

using qfilt::cdouble;
using qfilt::RationalFunction;
using qfilt::RationalGrid;
using qfilt::StateSpace;
using qfilt::TransferMatrix;

namespace {

RationalGrid doubled_from_text(int m, const std::vector<std::vector<std::string>>& entries,
                               const qfilt::SymbolTable& symbols,
                               const std::vector<std::vector<std::string>>* creation = nullptr) {
  return qfilt::assemble_doubled_up(TransferMatrix::from_text(m, entries, symbols, creation));
}

// random proper entry whose poles are drawn from the given pool (repeats
// allowed when dup is set, to exercise the companion fallback)
RationalFunction pool_entry(const std::vector<cdouble>& pool, std::mt19937_64& rng, bool dup) {
  std::uniform_int_distribution<int> n_poles(1, dup ? 3 : 2);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  std::normal_distribution<double> g;
  qfilt::Poly den{1.0};
  const int k = n_poles(rng);
  size_t last = pick(rng);
  for (int i = 0; i < k; ++i) {
    if (!dup || i == 0) last = pick(rng);
    den = qfilt::poly::mul(den, {-pool[last], 1.0});
  }
  qfilt::Poly num;
  std::uniform_int_distribution<int> n_deg(0, qfilt::poly::degree(den));
  const int nd = n_deg(rng);
  for (int i = 0; i <= nd; ++i) num.push_back(cdouble(g(rng), g(rng)));
  num = qfilt::poly::trim(num);
  if (qfilt::poly::is_zero(num)) num = {1.0};
  return {num, den};
}

RationalGrid random_doubled_grid(int m, std::mt19937_64& rng, bool with_creation, bool dup) {
  std::normal_distribution<double> g;
  std::vector<cdouble> pool;
  for (int i = 0; i < 3; ++i) pool.push_back(cdouble(g(rng), g(rng)));
  pool.push_back(cdouble(g(rng), 0.0));
  TransferMatrix tm;
  tm.m = m;
  tm.annihilation.assign(m, std::vector<RationalFunction>(m));
  for (auto& row : tm.annihilation)
    for (auto& e : row) e = pool_entry(pool, rng, dup);
  if (with_creation) {
    RationalGrid c(m, std::vector<RationalFunction>(m));
    for (auto& row : c)
      for (auto& e : row) e = pool_entry(pool, rng, dup);
    tm.creation = std::move(c);
  }
  return qfilt::assemble_doubled_up(tm);
}

cdouble safe_point(const RationalGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    const cdouble s(g(rng), g(rng));
    bool ok = true;
    for (const auto& row : grid)
      for (const auto& e : row)
        if (std::abs(qfilt::poly::eval(e.den, s)) <
            1e-3 * std::max(1.0, qfilt::poly::max_abs_coeff(e.den)))
          ok = false;
    if (ok) return s;
  }
}

}  // namespace

TEST_CASE("the normalized unit-magnitude filter realizes as scalar blocks") {
  const RationalGrid grid = doubled_from_text(1, {{"(s - 2)/(s + 2)"}}, {});
  const StateSpace ss = qfilt::tf_to_minimal_ss(grid);
  REQUIRE(ss.n == 1);
  REQUIRE(ss.m == 1);
  const Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
  CHECK((ss.A - 2.0 * I2).norm() < 1e-12);
  CHECK((ss.B - I2).norm() < 1e-12);
  CHECK((ss.C - 4.0 * I2).norm() < 1e-12);
  CHECK((ss.D - I2).norm() < 1e-12);
}

TEST_CASE("transfer values of the realizable normalized filter") {
  // the pair-structured realization of (s-2)/(s+2) after the storage
  // transform; values pinned by hand
  StateSpace ss = StateSpace::sized(1, 1);
  ss.A << 2, 0, 0, 2;
  ss.B << 0, 2, -2, 0;
  ss.C << 0, -2, 2, 0;
  ss.D.setIdentity();
  CHECK((qfilt::ss_to_tf(ss, cdouble(0.0)) + Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);
  CHECK(qfilt::ss_to_tf(ss, cdouble(2.0)).norm() < 1e-12);
  // a pole of the transfer function: s = -2 makes (-sI - A) singular
  CHECK_THROWS_AS(qfilt::ss_to_tf(ss, cdouble(-2.0)), qfilt::SingularityError);
}

TEST_CASE("a strictly proper cavity entry needs one mode") {
  const RationalGrid grid = doubled_from_text(1, {{"1/(s + 1)"}}, {});
  const StateSpace ss = qfilt::tf_to_minimal_ss(grid);
  CHECK(ss.n == 1);
  CHECK(ss.A.rows() == 2);
  CHECK(ss.D.norm() < 1e-12);
}

TEST_CASE("a constant transfer matrix realizes with no state") {
  const RationalGrid grid = doubled_from_text(1, {{"1"}}, {});
  const StateSpace ss = qfilt::tf_to_minimal_ss(grid);
  CHECK(ss.n == 0);
  CHECK((ss.D - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
  CHECK(qfilt::ss_to_tf(ss, cdouble(0.3, 0.7)).isApprox(Eigen::MatrixXcd::Identity(2, 2)));
}

TEST_CASE("minimality report flags padded states and reduction removes them") {
  StateSpace padded = StateSpace::sized(2, 1);
  padded.A.setZero();
  padded.A.topLeftCorner(2, 2) = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
  padded.A.bottomRightCorner(2, 2) = 3.0 * Eigen::MatrixXcd::Identity(2, 2);
  padded.B.setZero();
  padded.B.topRows(2).setIdentity();
  padded.C.setZero();
  padded.C.leftCols(2) = 4.0 * Eigen::MatrixXcd::Identity(2, 2);
  padded.D.setIdentity();

  const qfilt::MinimalityReport rep = qfilt::minimality_report(padded);
  CHECK(rep.state_dim == 4);
  CHECK(rep.controllable_rank == 2);
  CHECK_FALSE(rep.minimal);

  const StateSpace reduced = qfilt::reduce_to_minimal(padded);
  CHECK(reduced.n == 1);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 10; ++i) {
    const cdouble s(3.0 + std::abs(g(rng)), g(rng));  // clear of both eigenvalue sets
    CHECK((qfilt::ss_to_tf(reduced, s) - qfilt::ss_to_tf(padded, s)).norm() < 1e-10);
  }
}

TEST_CASE("realization round trip over random doubled grids") {
  std::mt19937_64 rng(101);
  int done = 0;
  for (int trial = 0; done < 24; ++trial) {
    REQUIRE(trial < 200);
    const int m = 1 + (trial % 2);
    const bool with_creation = trial % 3 != 0;
    const bool dup = trial % 4 == 0;  // repeated poles exercise the fallback
    const RationalGrid grid = random_doubled_grid(m, rng, with_creation, dup);
    StateSpace ss;
    try {
      ss = qfilt::tf_to_minimal_ss(grid);
    } catch (const qfilt::ConditionError&) {
      continue;  // the random pole draw can produce a legitimately odd split
    }
    CHECK(qfilt::minimality_report(ss).minimal);
    for (int i = 0; i < 2; ++i) {
      const cdouble s = safe_point(grid, rng);
      const Eigen::MatrixXcd want = qfilt::evaluate(grid, s);
      const Eigen::MatrixXcd got = qfilt::ss_to_tf(ss, s);
      CHECK((got - want).norm() < 1e-8 * std::max(1.0, want.norm()));
    }
    ++done;
  }
}

TEST_CASE("fifty random frequencies agree for one richer grid") {
  std::mt19937_64 rng(202);
  const RationalGrid grid = random_doubled_grid(2, rng, true, false);
  const StateSpace ss = qfilt::tf_to_minimal_ss(grid);
  for (int i = 0; i < 50; ++i) {
    const cdouble s = safe_point(grid, rng);
    const Eigen::MatrixXcd want = qfilt::evaluate(grid, s);
    CHECK((qfilt::ss_to_tf(ss, s) - want).norm() < 1e-8 * std::max(1.0, want.norm()));
  }
}

TEST_CASE("similarity transforms leave the transfer function invariant") {
  std::mt19937_64 rng(303);
  const RationalGrid grid = random_doubled_grid(1, rng, true, false);
  const StateSpace ss = qfilt::tf_to_minimal_ss(grid);
  const Eigen::MatrixXcd T = testutil::random_well_conditioned(2 * ss.n, rng);
  StateSpace moved = ss;
  moved.A = T.inverse() * ss.A * T;
  moved.B = T.inverse() * ss.B;
  moved.C = ss.C * T;
  for (int i = 0; i < 10; ++i) {
    const cdouble s = safe_point(grid, rng);
    CHECK((qfilt::ss_to_tf(moved, s) - qfilt::ss_to_tf(ss, s)).norm() < 1e-10);
  }
}

TEST_CASE("normalize rescales the frequency axis and denormalize undoes it") {
  const RationalGrid grid = doubled_from_text(1, {{"(s - 1)/(s + 1)"}}, {});
  const StateSpace ss = qfilt::tf_to_minimal_ss(grid);
  const double s0 = 1.0;
  const StateSpace dimless = qfilt::normalize(ss, s0);
  REQUIRE(dimless.scale.has_value());
  CHECK(dimless.scale->dimensionless);

  for (double w : {0.3, 1.7}) {
    const cdouble s(0.2, w);
    CHECK((qfilt::ss_to_tf(dimless, s) - qfilt::ss_to_tf(ss, s * (s0 / 2.0))).norm() < 1e-12);
  }

  const StateSpace back = qfilt::denormalize(dimless);
  CHECK((back.A - ss.A).norm() < 1e-14);
  CHECK((back.B - ss.B).norm() < 1e-14);
  CHECK((back.C - ss.C).norm() < 1e-14);
  CHECK((back.D - ss.D).norm() < 1e-14);

  CHECK_THROWS_AS(qfilt::normalize(dimless, s0), qfilt::ConditionError);
  CHECK_THROWS_AS(qfilt::denormalize(ss), qfilt::ConditionError);
}

TEST_CASE("improper grids are rejected") {
  RationalGrid grid(2, std::vector<RationalFunction>(2));
  grid[0][0] = RationalFunction{{0.0, 0.0, 1.0}, {1.0, 1.0}};  // s^2/(s+1)
  grid[0][1] = grid[1][0] = RationalFunction::constant(0.0);
  grid[1][1] = RationalFunction::constant(1.0);
  CHECK_THROWS_AS(qfilt::tf_to_minimal_ss(grid), std::invalid_argument);
}
