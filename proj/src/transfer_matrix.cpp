#include "qfilt/transfer_matrix.hpp"

#include <stdexcept>

#include "qfilt/errors.hpp"

namespace qfilt {

TransferMatrix TransferMatrix::from_text(
    int m, const std::vector<std::vector<std::string>>& entries, const SymbolTable& symbols,
    const std::vector<std::vector<std::string>>* creation_entries, bool reduce) {
  if (m <= 0) throw std::invalid_argument("channel count must be positive");
  auto check_shape = [m](const std::vector<std::vector<std::string>>& g, const char* what) {
    if (static_cast<int>(g.size()) != m)
      throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(m) + " rows");
    for (const auto& row : g)
      if (static_cast<int>(row.size()) != m)
        throw std::invalid_argument(std::string(what) + ": ragged row");
  };
  check_shape(entries, "entries");

  TransferMatrix tm;
  tm.m = m;
  tm.symbols = symbols;
  tm.annihilation_text = entries;
  tm.annihilation.assign(static_cast<size_t>(m), {});
  for (int r = 0; r < m; ++r) {
    tm.annihilation[static_cast<size_t>(r)].reserve(static_cast<size_t>(m));
    for (int c = 0; c < m; ++c)
      tm.annihilation[static_cast<size_t>(r)].push_back(
          parse_rational(entries[static_cast<size_t>(r)][static_cast<size_t>(c)], symbols, reduce));
  }
  if (creation_entries) {
    check_shape(*creation_entries, "creation_entries");
    tm.creation_text = *creation_entries;
    RationalGrid cg(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        cg[static_cast<size_t>(r)].push_back(parse_rational(
            (*creation_entries)[static_cast<size_t>(r)][static_cast<size_t>(c)], symbols, reduce));
    tm.creation = std::move(cg);
  }
  return tm;
}

RationalGrid assemble_doubled_up(const TransferMatrix& tm) {
  const int m = tm.m;
  const size_t n2 = static_cast<size_t>(2 * m);
  RationalGrid out(n2, std::vector<RationalFunction>(n2, RationalFunction::constant(0.0)));
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      const RationalFunction& g = tm.annihilation[static_cast<size_t>(k)][static_cast<size_t>(l)];
      out[static_cast<size_t>(2 * k)][static_cast<size_t>(2 * l)] = g;
      out[static_cast<size_t>(2 * k + 1)][static_cast<size_t>(2 * l + 1)] = g.conj_coeffs();
      if (tm.creation) {
        const RationalFunction& h = (*tm.creation)[static_cast<size_t>(k)][static_cast<size_t>(l)];
        out[static_cast<size_t>(2 * k)][static_cast<size_t>(2 * l + 1)] = h;
        out[static_cast<size_t>(2 * k + 1)][static_cast<size_t>(2 * l)] = h.conj_coeffs();
      }
    }
  }
  return out;
}

Eigen::MatrixXcd evaluate(const RationalGrid& grid, cdouble s) {
  const int rows = static_cast<int>(grid.size());
  const int cols = rows > 0 ? static_cast<int>(grid[0].size()) : 0;
  Eigen::MatrixXcd out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const RationalFunction& e = grid[static_cast<size_t>(r)][static_cast<size_t>(c)];
      const cdouble dv = poly::eval(e.den, s);
      if (std::abs(dv) <= 1e-12 * std::max(1.0, poly::max_abs_coeff(e.den)))
        throw PoleProximityError(r, c);
      out(r, c) = poly::eval(e.num, s) / dv;
    }
  }
  return out;
}

RationalGrid to_dimensionless(const RationalGrid& grid, double s0) {
  if (s0 <= 0.0) throw std::invalid_argument("reference rate must be positive");
  RationalGrid out = grid;
  for (auto& row : out)
    for (auto& e : row) e = e.scale_variable(0.5 * s0);
  return out;
}

}  // namespace qfilt
