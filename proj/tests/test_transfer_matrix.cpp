#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qfilt/errors.hpp"
#include "qfilt/transfer_matrix.hpp"

using qfilt::cdouble;
using qfilt::RationalFunction;
using qfilt::RationalGrid;
using qfilt::TransferMatrix;

namespace {

// random proper entry with poles drawn from a small pool
RationalFunction random_entry(std::mt19937_64& rng, int max_poles) {
  std::uniform_int_distribution<int> n_poles(0, max_poles);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> coin(0, 1);
  qfilt::Poly den{1.0};
  const int k = n_poles(rng);
  for (int i = 0; i < k; ++i) {
    if (coin(rng)) {
      den = qfilt::poly::mul(den, {cdouble(g(rng), g(rng)), 1.0});
    } else {
      den = qfilt::poly::mul(den, {cdouble(g(rng), 0.0), 1.0});
    }
  }
  qfilt::Poly num;
  std::uniform_int_distribution<int> n_deg(0, std::max(0, qfilt::poly::degree(den)));
  const int nd = n_deg(rng);
  for (int i = 0; i <= nd; ++i) num.push_back(cdouble(g(rng), g(rng)));
  return {qfilt::poly::trim(num), den};
}

TransferMatrix random_tm(int m, std::mt19937_64& rng, bool with_creation) {
  TransferMatrix tm;
  tm.m = m;
  tm.annihilation.assign(m, std::vector<RationalFunction>(m));
  for (auto& row : tm.annihilation)
    for (auto& e : row) e = random_entry(rng, 2);
  if (with_creation) {
    RationalGrid c(m, std::vector<RationalFunction>(m));
    for (auto& row : c)
      for (auto& e : row) e = random_entry(rng, 1);
    tm.creation = std::move(c);
  }
  return tm;
}

}  // namespace

TEST_CASE("from_text validates shapes") {
  CHECK_THROWS_AS(TransferMatrix::from_text(2, {{"1"}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(TransferMatrix::from_text(1, {{"1", "2"}}, {}), std::invalid_argument);
  const TransferMatrix tm = TransferMatrix::from_text(1, {{"(s - s0)/(s + s0)"}}, {{"s0", 1.0}});
  CHECK(tm.m == 1);
  CHECK(tm.annihilation_text[0][0] == "(s - s0)/(s + s0)");
  CHECK_FALSE(tm.creation.has_value());
}

TEST_CASE("doubling the unit-magnitude filter gives the expected grid values") {
  const TransferMatrix tm = TransferMatrix::from_text(1, {{"(s - s0)/(s + s0)"}}, {{"s0", 1.0}});
  const RationalGrid grid = qfilt::assemble_doubled_up(tm);
  REQUIRE(grid.size() == 2);
  REQUIRE(grid[0].size() == 2);

  CHECK(qfilt::evaluate(grid, cdouble(0.0)).isApprox(-Eigen::MatrixXcd::Identity(2, 2), 1e-12));
  CHECK(qfilt::evaluate(grid, cdouble(1.0)).norm() < 1e-12);
  const Eigen::MatrixXcd at_i = qfilt::evaluate(grid, cdouble(0.0, 1.0));
  CHECK((at_i - cdouble(0.0, 1.0) * Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("creation rows are the coefficient-conjugate images") {
  // entry 1/(s+i): its creation image must be 1/(s-i)
  TransferMatrix tm;
  tm.m = 1;
  tm.annihilation = {{RationalFunction{{1.0}, {cdouble(0.0, 1.0), 1.0}}}};
  const RationalGrid grid = qfilt::assemble_doubled_up(tm);
  const cdouble s(0.4, -0.2);
  CHECK(std::abs(grid[0][0].eval(s) - 1.0 / (s + cdouble(0, 1))) < 1e-13);
  CHECK(std::abs(grid[1][1].eval(s) - 1.0 / (s - cdouble(0, 1))) < 1e-13);
  CHECK(grid[0][1].is_zero());
  CHECK(grid[1][0].is_zero());
}

TEST_CASE("doubled grids satisfy the conjugate pair symmetry at every frequency") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 1 + (trial % 2);
    const TransferMatrix tm = random_tm(m, rng, trial % 3 == 0);
    const RationalGrid grid = qfilt::assemble_doubled_up(tm);
    const Eigen::MatrixXcd L = qfilt::pair_swap(m);
    std::normal_distribution<double> g;
    for (int i = 0; i < 6; ++i) {
      const cdouble s(g(rng), g(rng));
      Eigen::MatrixXcd G, Gc;
      try {
        G = qfilt::evaluate(grid, s);
        Gc = qfilt::evaluate(grid, std::conj(s));
      } catch (const qfilt::PoleProximityError&) {
        continue;  // sampled too close to a pole; symmetry is a value property
      }
      CHECK((Gc - L * G.conjugate() * L).norm() < 1e-10 * std::max(1.0, G.norm()));
    }
  }
}

TEST_CASE("doubled grid blocks line up with the source blocks") {
  std::mt19937_64 rng(29);
  const TransferMatrix tm = random_tm(2, rng, true);
  const RationalGrid grid = qfilt::assemble_doubled_up(tm);
  const cdouble s(0.37, 0.61);
  const Eigen::MatrixXcd G = qfilt::evaluate(grid, s);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(G(2 * i, 2 * j) - tm.annihilation[i][j].eval(s)) < 1e-12);
      CHECK(std::abs(G(2 * i, 2 * j + 1) - (*tm.creation)[i][j].eval(s)) < 1e-12);
    }
}

TEST_CASE("pole proximity raises instead of returning junk") {
  const TransferMatrix tm = TransferMatrix::from_text(1, {{"1/(s + 1)"}}, {});
  const RationalGrid grid = qfilt::assemble_doubled_up(tm);
  CHECK_THROWS_AS(qfilt::evaluate(grid, cdouble(-1.0)), qfilt::PoleProximityError);
}

TEST_CASE("dimensionless change of variable substitutes s -> (s0/2) s") {
  const TransferMatrix tm = TransferMatrix::from_text(1, {{"(s - s0)/(s + s0)"}}, {{"s0", 2.5}});
  const RationalGrid grid = qfilt::assemble_doubled_up(tm);
  const RationalGrid dimless = qfilt::to_dimensionless(grid, 2.5);
  for (double w : {0.0, 0.7, -1.3}) {
    const cdouble s(w, 0.4);
    CHECK((qfilt::evaluate(dimless, s) - qfilt::evaluate(grid, s * cdouble(2.5 / 2.0))).norm() <
          1e-12);
  }
  // the normalized filter has its zero at s = 2
  CHECK(qfilt::evaluate(dimless, cdouble(2.0)).norm() < 1e-12);
}
