#include "qfilt/io.hpp"

#include <fstream>
#include <sstream>

#include "qfilt/errors.hpp"

namespace qfilt::io {

namespace {

const json& require_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key, "missing field");
  return *it;
}

int require_int(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + "/" + key, "expected an integer");
  return v.get<int>();
}

double require_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_number()) throw SchemaError(path + "/" + key, "expected a number");
  return v.get<double>();
}

bool require_bool(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_boolean()) throw SchemaError(path + "/" + key, "expected a boolean");
  return v.get<bool>();
}

std::string require_string(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_string()) throw SchemaError(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

json::array_t require_array(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_array()) throw SchemaError(path + "/" + key, "expected an array");
  return v.get<json::array_t>();
}

ojson complex_to_json(const cdouble& z) { return ojson::array({z.real(), z.imag()}); }

cdouble complex_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SchemaError(path, "expected an [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

Eigen::MatrixXcd matrix_from_json(const json& parent, const std::string& key,
                                  int want_rows, int want_cols) {
  const json& v = require_field(parent, key, "");
  const std::string path = key;
  const int rows = require_int(v, "rows", path);
  const int cols = require_int(v, "cols", path);
  if (rows != want_rows || cols != want_cols)
    throw SchemaError(path, "expected a " + std::to_string(want_rows) + "x" +
                                std::to_string(want_cols) + " matrix, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  const json::array_t data = require_array(v, "data", path);
  if (static_cast<int>(data.size()) != rows * cols)
    throw SchemaError(path + "/data", "entry count does not match dims");
  Eigen::MatrixXcd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      M(i, j) = complex_from_json(data[size_t(i * cols + j)],
                                  path + "/data/" + std::to_string(i * cols + j));
  return M;
}

std::vector<std::vector<std::string>> entry_grid_from_json(const json& parent,
                                                           const std::string& key, int m,
                                                           bool required) {
  std::vector<std::vector<std::string>> out;
  if (!required && (!parent.is_object() || parent.find(key) == parent.end())) return out;
  const json::array_t rows = require_array(parent, key, "");
  if (static_cast<int>(rows.size()) != m)
    throw SchemaError(key, "expected " + std::to_string(m) + " rows");
  for (int i = 0; i < m; ++i) {
    const json& row = rows[size_t(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw SchemaError(key + "/" + std::to_string(i),
                        "expected " + std::to_string(m) + " entries");
    std::vector<std::string> r;
    for (int j = 0; j < m; ++j) {
      const json& cell = row[size_t(j)];
      if (!cell.is_string())
        throw SchemaError(key + "/" + std::to_string(i) + "/" + std::to_string(j),
                          "expected an expression string");
      r.push_back(cell.get<std::string>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

ojson matrix_json(const Eigen::MatrixXcd& M) {
  ojson m;
  m["rows"] = static_cast<int>(M.rows());
  m["cols"] = static_cast<int>(M.cols());
  ojson data = ojson::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) data.push_back(complex_to_json(M(i, j)));
  m["data"] = std::move(data);
  return m;
}

ojson to_json(const TransferMatrix& tm) {
  ojson j;
  j["kind"] = "transfer_matrix";
  j["m"] = tm.m;
  ojson symbols = ojson::object();
  for (const auto& [name, value] : tm.symbols) symbols[name] = value;
  j["symbols"] = std::move(symbols);
  auto text_or_render = [](const RationalGrid& grid,
                           const std::vector<std::vector<std::string>>& text) {
    ojson rows = ojson::array();
    for (size_t i = 0; i < grid.size(); ++i) {
      ojson row = ojson::array();
      for (size_t k = 0; k < grid[i].size(); ++k) {
        if (i < text.size() && k < text[i].size() && !text[i][k].empty())
          row.push_back(text[i][k]);
        else
          row.push_back(render(grid[i][k]));
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["entries"] = text_or_render(tm.annihilation, tm.annihilation_text);
  if (tm.creation) j["creation_entries"] = text_or_render(*tm.creation, tm.creation_text);
  return j;
}

TransferMatrix transfer_matrix_from_json(const json& j) {
  const int m = require_int(j, "m", "");
  if (m <= 0) throw SchemaError("m", "channel count must be positive");
  SymbolTable symbols;
  const json& sym = require_field(j, "symbols", "");
  if (!sym.is_object()) throw SchemaError("symbols", "expected an object");
  for (auto it = sym.begin(); it != sym.end(); ++it) {
    if (!it.value().is_number())
      throw SchemaError("symbols/" + it.key(), "expected a number");
    symbols[it.key()] = it.value().get<double>();
  }
  const auto entries = entry_grid_from_json(j, "entries", m, true);
  const auto creation = entry_grid_from_json(j, "creation_entries", m, false);
  try {
    return TransferMatrix::from_text(m, entries, symbols,
                                     creation.empty() ? nullptr : &creation);
  } catch (const ParseError& e) {
    throw SchemaError("entries", e.what());
  }
}

ojson to_json(const StateSpace& ss) {
  ojson j;
  j["kind"] = "state_space";
  j["sign_convention"] = "paper_negative_s";
  j["n"] = ss.n;
  j["m"] = ss.m;
  j["A"] = matrix_json(ss.A);
  j["B"] = matrix_json(ss.B);
  j["C"] = matrix_json(ss.C);
  j["D"] = matrix_json(ss.D);
  if (ss.scale) {
    ojson sc;
    sc["s0"] = ss.scale->s0;
    sc["dimensionless"] = ss.scale->dimensionless;
    j["scale"] = std::move(sc);
  }
  return j;
}

StateSpace state_space_from_json(const json& j) {
  const std::string conv = require_string(j, "sign_convention", "");
  if (conv != "paper_negative_s")
    throw SchemaError("sign_convention", "unsupported convention '" + conv + "'");
  StateSpace ss;
  ss.n = require_int(j, "n", "");
  ss.m = require_int(j, "m", "");
  if (ss.n < 0 || ss.m <= 0) throw SchemaError("n", "need n >= 0 and m > 0");
  ss.A = matrix_from_json(j, "A", 2 * ss.n, 2 * ss.n);
  ss.B = matrix_from_json(j, "B", 2 * ss.n, 2 * ss.m);
  ss.C = matrix_from_json(j, "C", 2 * ss.m, 2 * ss.n);
  ss.D = matrix_from_json(j, "D", 2 * ss.m, 2 * ss.m);
  if (j.is_object() && j.find("scale") != j.end()) {
    const json& sc = j["scale"];
    ScaleRecord rec;
    rec.s0 = require_number(sc, "s0", "scale");
    rec.dimensionless = require_bool(sc, "dimensionless", "scale");
    ss.scale = rec;
  }
  ss.validate();
  return ss;
}

ojson to_json(const GeneralizedOpenOscillator& goo) {
  ojson j;
  j["kind"] = "generalized_open_oscillator";
  j["n"] = goo.n;
  j["m"] = goo.m;
  j["S"] = matrix_json(goo.S);
  j["K"] = matrix_json(goo.K);
  j["Omega"] = matrix_json(goo.Omega);
  return j;
}

GeneralizedOpenOscillator oscillator_from_json(const json& j) {
  GeneralizedOpenOscillator goo;
  goo.n = require_int(j, "n", "");
  goo.m = require_int(j, "m", "");
  if (goo.n < 0 || goo.m <= 0) throw SchemaError("n", "need n >= 0 and m > 0");
  goo.S = matrix_from_json(j, "S", goo.m, goo.m);
  goo.K = matrix_from_json(j, "K", goo.m, 2 * goo.n);
  goo.Omega = matrix_from_json(j, "Omega", 2 * goo.n, 2 * goo.n);
  goo.validate();
  return goo;
}

ojson to_json(const PhysicalRealization& phys) {
  ojson j;
  j["kind"] = "physical_realization";
  ojson oscs = ojson::array();
  for (const OneModeRealization& r : phys.oscillators) {
    ojson o;
    o["mode_id"] = r.mode_id;
    o["channel"] = r.channel;
    o["detuning"] = r.detuning;
    o["internal_pump"] = complex_to_json(r.internal_pump);
    o["coupling_alpha"] = complex_to_json(r.coupling_alpha);
    o["coupling_beta"] = complex_to_json(r.coupling_beta);
    o["aux_bandwidth"] = r.aux_bandwidth;
    o["mixing_angle"] = r.mixing_angle;
    o["phase"] = r.phase;
    o["pump_intensity_1"] = complex_to_json(r.pump_intensity_1);
    o["pump_intensity_2"] = complex_to_json(r.pump_intensity_2);
    o["has_aux"] = r.has_aux;
    oscs.push_back(std::move(o));
  }
  j["oscillators"] = std::move(oscs);
  ojson inters = ojson::array();
  for (const InteractionTerm& t : phys.interactions) {
    ojson o;
    o["mode_k"] = t.mode_k;
    o["mode_l"] = t.mode_l;
    o["eps1"] = complex_to_json(t.eps1);
    o["eps2"] = complex_to_json(t.eps2);
    inters.push_back(std::move(o));
  }
  j["interactions"] = std::move(inters);
  ojson hw = ojson::array();
  for (const InteractionHardware& h : phys.interaction_hardware) {
    ojson o;
    o["mixing_angle"] = h.mixing_angle;
    o["phase"] = h.phase;
    o["pump"] = complex_to_json(h.pump);
    hw.push_back(std::move(o));
  }
  j["interaction_hardware"] = std::move(hw);
  j["series_order"] = phys.series_order;
  ojson crystals = ojson::array();
  for (const CrystalSpec& c : phys.crystal_params) {
    ojson o;
    o["r"] = c.r;
    o["L_cav"] = c.L_cav;
    o["T_mirror"] = c.T_mirror;
    crystals.push_back(std::move(o));
  }
  j["crystal_params"] = std::move(crystals);
  return j;
}

PhysicalRealization physical_realization_from_json(const json& j) {
  PhysicalRealization phys;
  for (const json& o : require_array(j, "oscillators", "")) {
    OneModeRealization r;
    r.mode_id = require_int(o, "mode_id", "oscillators");
    r.channel = require_int(o, "channel", "oscillators");
    r.detuning = require_number(o, "detuning", "oscillators");
    r.internal_pump = complex_from_json(require_field(o, "internal_pump", "oscillators"),
                                        "oscillators/internal_pump");
    r.coupling_alpha = complex_from_json(require_field(o, "coupling_alpha", "oscillators"),
                                         "oscillators/coupling_alpha");
    r.coupling_beta = complex_from_json(require_field(o, "coupling_beta", "oscillators"),
                                        "oscillators/coupling_beta");
    r.aux_bandwidth = require_number(o, "aux_bandwidth", "oscillators");
    r.mixing_angle = require_number(o, "mixing_angle", "oscillators");
    r.phase = require_number(o, "phase", "oscillators");
    r.pump_intensity_1 = complex_from_json(
        require_field(o, "pump_intensity_1", "oscillators"), "oscillators/pump_intensity_1");
    r.pump_intensity_2 = complex_from_json(
        require_field(o, "pump_intensity_2", "oscillators"), "oscillators/pump_intensity_2");
    r.has_aux = require_bool(o, "has_aux", "oscillators");
    phys.oscillators.push_back(r);
  }
  for (const json& o : require_array(j, "interactions", "")) {
    InteractionTerm t;
    t.mode_k = require_int(o, "mode_k", "interactions");
    t.mode_l = require_int(o, "mode_l", "interactions");
    t.eps1 = complex_from_json(require_field(o, "eps1", "interactions"), "interactions/eps1");
    t.eps2 = complex_from_json(require_field(o, "eps2", "interactions"), "interactions/eps2");
    phys.interactions.push_back(t);
  }
  for (const json& o : require_array(j, "interaction_hardware", "")) {
    InteractionHardware h;
    h.mixing_angle = require_number(o, "mixing_angle", "interaction_hardware");
    h.phase = require_number(o, "phase", "interaction_hardware");
    h.pump = complex_from_json(require_field(o, "pump", "interaction_hardware"),
                               "interaction_hardware/pump");
    phys.interaction_hardware.push_back(h);
  }
  for (const json& o : require_array(j, "series_order", "")) {
    if (!o.is_number_integer()) throw SchemaError("series_order", "expected integers");
    phys.series_order.push_back(o.get<int>());
  }
  for (const json& o : require_array(j, "crystal_params", "")) {
    CrystalSpec c;
    c.r = require_number(o, "r", "crystal_params");
    c.L_cav = require_number(o, "L_cav", "crystal_params");
    c.T_mirror = require_number(o, "T_mirror", "crystal_params");
    phys.crystal_params.push_back(c);
  }
  return phys;
}

std::string kind_of(const json& j) {
  if (!j.is_object() || j.find("kind") == j.end() || !j["kind"].is_string())
    throw SchemaError("kind", "document carries no kind tag");
  return j["kind"].get<std::string>();
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("JSON parse error: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace qfilt::io
