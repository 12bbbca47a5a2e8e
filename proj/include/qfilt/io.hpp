#pragma once

#include <string>

#include "json.hpp"
#include "qfilt/oscillator.hpp"
#include "qfilt/synthesis.hpp"

namespace qfilt::io {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// Serializers emit a fixed field order so identical values always produce
// identical documents.  Complex entries are [re, im] pairs; matrices are
// row-major with explicit dims; every document carries a "kind" tag, and
// state spaces record the sign convention explicitly.

// {rows, cols, data: [[re, im], ...]} row-major.
ojson matrix_json(const Eigen::MatrixXcd& M);

ojson to_json(const TransferMatrix& tm);
ojson to_json(const StateSpace& ss);
ojson to_json(const GeneralizedOpenOscillator& goo);
ojson to_json(const PhysicalRealization& phys);

TransferMatrix transfer_matrix_from_json(const json& j);
StateSpace state_space_from_json(const json& j);
GeneralizedOpenOscillator oscillator_from_json(const json& j);
PhysicalRealization physical_realization_from_json(const json& j);

// "kind" field of a document; SchemaError when absent or not a string.
std::string kind_of(const json& j);

// Canonical text form: two-space indentation plus trailing newline.
std::string dump(const ojson& j);

json parse_text(const std::string& text);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qfilt::io
