#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "qfilt/parser.hpp"
#include "qfilt/rational.hpp"

namespace qfilt {

using RationalGrid = std::vector<std::vector<RationalFunction>>;

// An m-channel transfer matrix before doubling.  annihilation holds the
// input-annihilation -> output-annihilation entries; creation (optional)
// holds the squeezing-type input-creation -> output-annihilation entries and
// is zero when absent.  Source expression strings are kept so serialization
// round-trips byte-identically.
struct TransferMatrix {
  int m = 0;
  RationalGrid annihilation;
  std::optional<RationalGrid> creation;
  SymbolTable symbols;

  std::vector<std::vector<std::string>> annihilation_text;
  std::vector<std::vector<std::string>> creation_text;

  // Builds from expression strings, validating shapes.
  static TransferMatrix from_text(int m,
                                  const std::vector<std::vector<std::string>>& entries,
                                  const SymbolTable& symbols,
                                  const std::vector<std::vector<std::string>>* creation_entries = nullptr,
                                  bool reduce = false);
};

// Expands to the 2m x 2m doubled-up grid in interleaved ordering
// (channel-1 annihilation row, channel-1 creation row, ...).  Creation rows
// are the coefficient-conjugate images of the annihilation rows; a present
// creation block fills the cross couplings, with its conjugate image mirrored
// into the creation rows.
RationalGrid assemble_doubled_up(const TransferMatrix& tm);

// Entry-wise evaluation at a complex frequency.  Throws PoleProximityError
// when a denominator magnitude falls below 1e-12 relative to its coefficient
// scale.
Eigen::MatrixXcd evaluate(const RationalGrid& grid, cdouble s);

// Variable change s -> (s0/2)*s applied to every entry: the dimensionless
// frequency used throughout the filter analysis.
RationalGrid to_dimensionless(const RationalGrid& grid, double s0);

}  // namespace qfilt
