// qfilt: transfer matrices of linear quantum systems -> realizable state
// spaces -> oscillator (S, L, H) descriptions -> hardware parameters, plus
// frequency-domain verification sweeps.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qfilt/dynamics.hpp"
#include "qfilt/errors.hpp"
#include "qfilt/io.hpp"
#include "qfilt/oscillator.hpp"
#include "qfilt/realizability.hpp"
#include "qfilt/synthesis.hpp"

namespace {

using qfilt::cdouble;
using qfilt::StateSpace;
namespace io = qfilt::io;

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;  // 0 means "pick a default"
  int points = 200;
  std::string scale = "linear";
};

std::vector<double> make_grid(const GridSpec& g, double default_stop) {
  const double stop = g.stop > 0.0 ? g.stop : default_stop;
  if (g.points < 2) throw qfilt::Error("grid needs at least 2 points");
  std::vector<double> out;
  out.reserve(size_t(g.points));
  if (g.scale == "log") {
    if (g.start <= 0.0) throw qfilt::Error("log grid needs a positive start");
    const double ratio = std::pow(stop / g.start, 1.0 / (g.points - 1));
    double w = g.start;
    for (int i = 0; i < g.points; ++i, w *= ratio) out.push_back(w);
  } else if (g.scale == "linear") {
    for (int i = 0; i < g.points; ++i)
      out.push_back(g.start + (stop - g.start) * i / (g.points - 1));
  } else {
    throw qfilt::Error("grid scale must be linear or log");
  }
  return out;
}

std::string fmt_e(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt_c(const cdouble& z) {
  if (z.imag() == 0.0) return fmt_g(z.real());
  return fmt_g(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt_g(std::abs(z.imag())) + "i";
}

std::string fmt_matrix(const Eigen::MatrixXcd& M, const std::string& indent) {
  std::string out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    out += indent + "[";
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      out += fmt_c(M(i, j));
      if (j + 1 < M.cols()) out += ", ";
    }
    out += "]\n";
  }
  if (M.rows() == 0) out += indent + "(empty)\n";
  return out;
}

void emit(const std::string& output_path, const std::string& content) {
  if (output_path.empty())
    std::cout << content;
  else
    io::write_text_file(output_path, content);
}

double default_band(const qfilt::SymbolTable& symbols) {
  auto it = symbols.find("s0");
  return 10.0 * std::max(1.0, it == symbols.end() ? 0.0 : it->second);
}

// Symplectic residuals evaluated through a state space instead of rational
// entries, for documents that arrive already realized.
qfilt::SymplecticReport symplectic_from_ss(const StateSpace& ss,
                                           const std::vector<double>& omegas, double tol) {
  const Eigen::MatrixXcd Jm = qfilt::J_of(ss.m);
  qfilt::SymplecticReport rep;
  rep.threshold = tol;
  for (double w : omegas) {
    const cdouble s(0.0, w);
    const Eigen::MatrixXcd Gl = qfilt::ss_to_tf(ss, std::conj(s));
    const Eigen::MatrixXcd Gr = qfilt::ss_to_tf(ss, -s);
    rep.residuals.push_back((Gl.adjoint() * Jm * Gr - Jm).norm());
    rep.max_residual = std::max(rep.max_residual, rep.residuals.back());
  }
  rep.pass = !omegas.empty() && rep.max_residual <= tol;
  return rep;
}

io::ojson symplectic_json(const qfilt::SymplecticReport& rep, size_t points) {
  io::ojson j;
  j["max_residual"] = rep.max_residual;
  j["threshold"] = rep.threshold;
  j["points"] = points;
  j["pass"] = rep.pass;
  return j;
}

io::ojson realizability_json(const qfilt::RealizabilityReport& rep) {
  io::ojson j;
  j["residual_dyn"] = rep.residual_dyn;
  j["residual_out"] = rep.residual_out;
  j["residual_feed"] = rep.residual_feed;
  j["threshold"] = rep.threshold;
  j["pass"] = rep.pass;
  return j;
}

io::ojson conditions_json(const qfilt::TransformConditions& tc) {
  io::ojson j;
  j["min_eigen_pair"] = tc.min_eigen_pair;
  j["eigen_pair_threshold"] = tc.eigen_pair_threshold;
  j["unitarity_defect"] = tc.unitarity_defect;
  j["feedthrough_residual"] = tc.feedthrough_residual;
  j["eigen_ok"] = tc.eigen_ok;
  j["d_ok"] = tc.d_ok;
  j["feasible"] = tc.feasible;
  return j;
}

io::ojson symmetry_json(const qfilt::DoubledUpSymmetry& sym) {
  io::ojson j;
  j["residual"] = sym.residual;
  j["pass"] = sym.pass;
  return j;
}

struct RealizeFlags {
  std::optional<double> s0_override;
  bool no_normalize = false;
};

// Transfer matrix -> realizable physical-scale state space.  When a
// reference rate is available (s0 symbol or --s0), realization happens on
// the dimensionless grid so the construction lands on the canonical
// integer-valued matrices, and the result is scaled back afterwards.
struct RealizeOutcome {
  StateSpace system;
  Eigen::MatrixXcd T, X;
  qfilt::RealizabilityReport report;
  std::optional<double> s0_used;
};

RealizeOutcome realize_transfer_matrix(const qfilt::TransferMatrix& tm,
                                       const RealizeFlags& flags) {
  RealizeOutcome out;
  const qfilt::RationalGrid grid = qfilt::assemble_doubled_up(tm);

  std::optional<double> s0;
  if (!flags.no_normalize) {
    if (flags.s0_override)
      s0 = *flags.s0_override;
    else if (auto it = tm.symbols.find("s0"); it != tm.symbols.end() && it->second > 0.0)
      s0 = it->second;
  }

  if (s0) {
    const qfilt::RationalGrid dimless = qfilt::to_dimensionless(grid, *s0);
    StateSpace minimal = qfilt::tf_to_minimal_ss(dimless);
    qfilt::TransformResult res = qfilt::transform_to_realizable(minimal);
    res.system.scale = qfilt::ScaleRecord{*s0, true};
    out.system = qfilt::denormalize(res.system);
    out.T = res.T;
    out.X = res.X;
    out.report = qfilt::check_realizable(out.system, 1e-8);
    out.s0_used = s0;
  } else {
    StateSpace minimal = qfilt::tf_to_minimal_ss(grid);
    qfilt::TransformResult res = qfilt::transform_to_realizable(minimal);
    out.system = res.system;
    out.T = res.T;
    out.X = res.X;
    out.report = res.report;
  }
  return out;
}

int run_check(const std::string& input, const std::string& output, bool json_out,
              const GridSpec& grid, double tol_symplectic) {
  const io::json doc = io::read_json_file(input);
  const std::string kind = io::kind_of(doc);

  qfilt::SymplecticReport symp;
  qfilt::TransformConditions tc;
  std::optional<qfilt::RealizabilityReport> rr;
  size_t points = 0;

  if (kind == "transfer_matrix") {
    const qfilt::TransferMatrix tm = io::transfer_matrix_from_json(doc);
    const qfilt::RationalGrid g2m = qfilt::assemble_doubled_up(tm);
    const std::vector<double> omegas = make_grid(grid, default_band(tm.symbols));
    points = omegas.size();
    symp = qfilt::check_symplectic_tf(g2m, omegas, tol_symplectic);
    tc = qfilt::check_transform_conditions(qfilt::tf_to_minimal_ss(g2m));
  } else if (kind == "state_space") {
    const StateSpace ss = io::state_space_from_json(doc);
    const std::vector<double> omegas = make_grid(grid, 10.0 * std::max(1.0, ss.A.norm()));
    points = omegas.size();
    symp = symplectic_from_ss(ss, omegas, tol_symplectic);
    tc = qfilt::check_transform_conditions(ss);
    rr = qfilt::check_realizable(ss);
  } else {
    throw qfilt::SchemaError("kind", "check expects a transfer_matrix or state_space");
  }

  bool pass = symp.pass && tc.feasible;
  if (kind == "state_space") pass = pass && rr->pass;

  std::string text;
  if (json_out) {
    io::ojson j;
    j["kind"] = "check_report";
    j["input_kind"] = kind;
    j["symplectic"] = symplectic_json(symp, points);
    j["transform_conditions"] = conditions_json(tc);
    if (rr) j["realizability"] = realizability_json(*rr);
    j["pass"] = pass;
    text = io::dump(j);
  } else {
    auto line = [&](const char* name, bool ok, const std::string& detail) {
      text += std::string(ok ? "PASS" : "FAIL") + "  " + name + "  " + detail + "\n";
    };
    line("symplectic identity", symp.pass,
         "max residual " + fmt_g(symp.max_residual) + " over " + std::to_string(points) +
             " points (tol " + fmt_g(symp.threshold) + ")");
    line("eigenvalue pair condition", tc.eigen_ok,
         "min |l_i + conj(l_j)| = " + fmt_g(tc.min_eigen_pair));
    line("feedthrough unitary symplectic", tc.d_ok,
         "unitarity defect " + fmt_g(tc.unitarity_defect) + ", symplectic defect " +
             fmt_g(tc.feedthrough_residual));
    if (rr)
      line("realizability identities", rr->pass,
           "dyn " + fmt_g(rr->residual_dyn) + ", out " + fmt_g(rr->residual_out) +
               ", feed " + fmt_g(rr->residual_feed));
    text += std::string(pass ? "PASS" : "FAIL") + "  overall\n";
  }
  emit(output, text);
  return pass ? 0 : 1;
}

int run_realize(const std::string& input, const std::string& output, bool json_out,
                const RealizeFlags& flags) {
  const io::json doc = io::read_json_file(input);
  const std::string kind = io::kind_of(doc);

  RealizeOutcome out;
  if (kind == "transfer_matrix") {
    out = realize_transfer_matrix(io::transfer_matrix_from_json(doc), flags);
  } else if (kind == "state_space") {
    const StateSpace ss = io::state_space_from_json(doc);
    qfilt::TransformResult res = qfilt::transform_to_realizable(ss);
    out.system = res.system;
    out.T = res.T;
    out.X = res.X;
    out.report = res.report;
  } else {
    throw qfilt::SchemaError("kind", "realize expects a transfer_matrix or state_space");
  }

  const qfilt::DoubledUpSymmetry sym = qfilt::check_doubled_up_symmetry(out.system);

  std::string text;
  if (json_out) {
    io::ojson j;
    j["kind"] = "realize_report";
    j["system"] = io::to_json(out.system);
    j["T"] = io::matrix_json(out.T);
    j["X"] = io::matrix_json(out.X);
    j["realizability"] = realizability_json(out.report);
    j["doubled_up_symmetry"] = symmetry_json(sym);
    if (out.s0_used) j["s0"] = *out.s0_used;
    text = io::dump(j);
  } else {
    text += "realizable state space (n=" + std::to_string(out.system.n) +
            ", m=" + std::to_string(out.system.m) + ")\n";
    if (out.s0_used) text += "reference rate s0 = " + fmt_g(*out.s0_used) + "\n";
    text += "A:\n" + fmt_matrix(out.system.A, "  ");
    text += "B:\n" + fmt_matrix(out.system.B, "  ");
    text += "C:\n" + fmt_matrix(out.system.C, "  ");
    text += "D:\n" + fmt_matrix(out.system.D, "  ");
    text += "residuals: dyn " + fmt_g(out.report.residual_dyn) + ", out " +
            fmt_g(out.report.residual_out) + ", feed " + fmt_g(out.report.residual_feed) +
            "\n";
    if (!sym.pass)
      text += "warning: transformed model breaks the doubled-up pair symmetry (residual " +
              fmt_g(sym.residual) + ")\n";
  }
  emit(output, text);
  return 0;
}

std::string describe_operator_row(const Eigen::MatrixXcd& K, int row) {
  std::string out;
  for (int p = 0; p < K.cols(); ++p) {
    const cdouble k = K(row, p);
    if (std::abs(k) == 0.0) continue;
    if (!out.empty()) out += " + ";
    out += "(" + fmt_c(k) + ")*a" + std::to_string(p / 2 + 1);
    if (p % 2 == 1) out += "^dag";
  }
  return out.empty() ? "0" : out;
}

int run_slh(const std::string& input, const std::string& output, bool json_out,
            const RealizeFlags& flags) {
  const io::json doc = io::read_json_file(input);
  const std::string kind = io::kind_of(doc);
  StateSpace ss;
  if (kind == "state_space")
    ss = io::state_space_from_json(doc);
  else if (kind == "transfer_matrix")
    ss = realize_transfer_matrix(io::transfer_matrix_from_json(doc), flags).system;
  else
    throw qfilt::SchemaError("kind", "slh expects a transfer_matrix or state_space");

  const qfilt::GeneralizedOpenOscillator goo = qfilt::extract_slh(ss);
  const std::vector<qfilt::HamiltonianTerm> terms = qfilt::total_hamiltonian_terms(goo);

  std::string text;
  if (json_out) {
    io::ojson j;
    j["kind"] = "slh_report";
    j["oscillator"] = io::to_json(goo);
    io::ojson tl = io::ojson::array();
    for (const auto& t : terms) {
      io::ojson o;
      o["kind"] = t.kind == qfilt::HamiltonianTerm::Kind::kInternal ? "internal" : "drive";
      o["expression"] = t.expression;
      o["coefficient"] = io::ojson::array({t.coefficient.real(), t.coefficient.imag()});
      tl.push_back(std::move(o));
    }
    j["hamiltonian_terms"] = std::move(tl);
    text = io::dump(j);
  } else {
    text += "S:\n" + fmt_matrix(goo.S, "  ");
    for (int row = 0; row < goo.m; ++row)
      text += "L" + std::to_string(row + 1) + " = " + describe_operator_row(goo.K, row) + "\n";
    std::string internal;
    for (const auto& t : terms)
      if (t.kind == qfilt::HamiltonianTerm::Kind::kInternal) {
        if (!internal.empty()) internal += " + ";
        internal += "(" + fmt_c(t.coefficient) + ")*" + t.expression;
      }
    text += "H = hbar * [" + (internal.empty() ? "0" : internal) + "]\n";
    std::string drive;
    for (const auto& t : terms)
      if (t.kind == qfilt::HamiltonianTerm::Kind::kDrive) {
        if (!drive.empty()) drive += " + ";
        drive += "(" + fmt_c(t.coefficient) + ")*" + t.expression;
      }
    text += "H_drive = hbar * [" + (drive.empty() ? "0" : drive) + "]\n";
  }
  emit(output, text);
  return 0;
}

int run_synth(const std::string& input, const std::string& output, bool json_out,
              const RealizeFlags& flags, const qfilt::SynthesisOptions& opts) {
  const io::json doc = io::read_json_file(input);
  const std::string kind = io::kind_of(doc);
  qfilt::GeneralizedOpenOscillator goo;
  if (kind == "generalized_open_oscillator")
    goo = io::oscillator_from_json(doc);
  else if (kind == "state_space")
    goo = qfilt::extract_slh(io::state_space_from_json(doc));
  else if (kind == "transfer_matrix")
    goo = qfilt::extract_slh(
        realize_transfer_matrix(io::transfer_matrix_from_json(doc), flags).system);
  else
    throw qfilt::SchemaError(
        "kind", "synth expects a transfer_matrix, state_space, or oscillator");

  const qfilt::PhysicalRealization phys = qfilt::synthesize(goo, opts);

  std::string text;
  if (json_out) {
    text = io::dump(io::to_json(phys));
  } else {
    text += "hardware realization (" + std::to_string(phys.oscillators.size()) +
            " oscillator stage(s))\n";
    for (size_t i = 0; i < phys.oscillators.size(); ++i) {
      const qfilt::OneModeRealization& r = phys.oscillators[i];
      text += "mode " + std::to_string(r.mode_id + 1) + " (channel " +
              std::to_string(r.channel + 1) + ")\n";
      text += "  detuning        " + fmt_g(r.detuning) + "\n";
      text += "  internal pump   " + fmt_c(r.internal_pump) + "\n";
      if (r.has_aux) {
        text += "  coupling row    alpha=" + fmt_c(r.coupling_alpha) +
                ", beta=" + fmt_c(r.coupling_beta) + "\n";
        text += "  aux bandwidth   " + fmt_g(r.aux_bandwidth) + "\n";
        text += "  pump eps1       " + fmt_c(r.pump_intensity_1) + "\n";
        text += "  pump eps2       " + fmt_c(r.pump_intensity_2) + "\n";
        text += "  mixing angle    " + fmt_g(r.mixing_angle) + "\n";
        text += "  phase           " + fmt_g(r.phase) + "\n";
      } else {
        text += "  no bath coupling\n";
      }
      const qfilt::CrystalSpec& c = phys.crystal_params[i];
      text += "  crystal         r=" + fmt_g(c.r) + ", L=" + fmt_g(c.L_cav) +
              " m, T=" + fmt_g(c.T_mirror) + "\n";
    }
    for (size_t i = 0; i < phys.interactions.size(); ++i) {
      const qfilt::InteractionTerm& t = phys.interactions[i];
      const qfilt::InteractionHardware& h = phys.interaction_hardware[i];
      text += "interaction a" + std::to_string(t.mode_k + 1) + " <-> a" +
              std::to_string(t.mode_l + 1) + ": eps1=" + fmt_c(t.eps1) +
              ", eps2=" + fmt_c(t.eps2) + ", mixing angle " + fmt_g(h.mixing_angle) +
              ", phase " + fmt_g(h.phase) + ", pump " + fmt_c(h.pump) + "\n";
    }
    text += "series order: ";
    if (phys.series_order.empty()) text += "(single stage)";
    for (size_t i = 0; i < phys.series_order.size(); ++i) {
      if (i) text += " -> ";
      text += "a" + std::to_string(phys.series_order[i] + 1);
    }
    text += "\n";
  }
  emit(output, text);
  return 0;
}

qfilt::TwoModeModel model_from_json(const io::json& doc) {
  if (io::kind_of(doc) != "two_mode_model")
    throw qfilt::SchemaError("kind", "sweep expects a two_mode_model document");
  auto get = [&](const char* key, double fallback, bool required) {
    if (doc.find(key) == doc.end()) {
      if (required) throw qfilt::SchemaError(key, "missing field");
      return fallback;
    }
    if (!doc[key].is_number()) throw qfilt::SchemaError(key, "expected a number");
    return doc[key].get<double>();
  };
  qfilt::TwoModeModel model;
  model.s0 = get("s0", 0.0, true);
  model.gamma = get("gamma", 0.0, true);
  model.gamma_a_eps = get("gamma_a_eps", 0.0, false);
  model.gamma_b_eps = get("gamma_b_eps", 0.0, false);
  const double La = get("L_a", 0.0, false);
  const double Lb = get("L_b", 0.0, false);
  if (La > 0.0) model.L_a = La;
  if (Lb > 0.0) model.L_b = Lb;
  model.validate();
  return model;
}

int run_sweep(const std::string& input, const std::string& output, bool json_out,
              const GridSpec& grid) {
  const qfilt::TwoModeModel model = model_from_json(io::read_json_file(input));
  const std::vector<double> omegas = make_grid(grid, std::max(model.s0, 1.0));

  std::string text;
  io::ojson rows = io::ojson::array();
  if (!json_out)
    text += "omega,re_signal,im_signal,abs2_signal,abs2_noise_a,abs2_noise_b,formula_ratio\n";
  for (double w : omegas) {
    const qfilt::IOResponse io_resp = qfilt::lossy_transfer(model, w);
    const double formula_ratio =
        model.gamma_a_eps > 0.0
            ? w * w * model.gamma_b_eps / (model.s0 * model.gamma * model.gamma_a_eps)
            : 0.0;
    if (json_out) {
      io::ojson r;
      r["omega"] = w;
      r["signal"] = io::ojson::array({io_resp.signal.real(), io_resp.signal.imag()});
      r["abs2_signal"] = std::norm(io_resp.signal);
      r["abs2_noise_a"] = std::norm(io_resp.noise_a);
      r["abs2_noise_b"] = std::norm(io_resp.noise_b);
      r["formula_ratio"] = formula_ratio;
      rows.push_back(std::move(r));
    } else {
      text += fmt_e(w) + "," + fmt_e(io_resp.signal.real()) + "," +
              fmt_e(io_resp.signal.imag()) + "," + fmt_e(std::norm(io_resp.signal)) + "," +
              fmt_e(std::norm(io_resp.noise_a)) + "," + fmt_e(std::norm(io_resp.noise_b)) +
              "," + fmt_e(formula_ratio) + "\n";
    }
  }
  if (json_out) {
    io::ojson j;
    j["kind"] = "sweep_report";
    j["rows"] = std::move(rows);
    text = io::dump(j);
  }
  emit(output, text);
  return 0;
}

int run_losscurve(const std::string& output, bool json_out, double L_arm, double target,
                  const std::string& convention_name, const GridSpec& la_grid,
                  double gamma_factor) {
  qfilt::RatioConvention conv;
  if (convention_name == "amplitude")
    conv = qfilt::RatioConvention::kAmplitude;
  else if (convention_name == "power")
    conv = qfilt::RatioConvention::kPower;
  else
    throw qfilt::Error("convention must be amplitude or power");

  const std::vector<double> lengths = make_grid(la_grid, 100.0);
  const std::vector<qfilt::LossCurvePoint> curve =
      qfilt::loss_requirement_curve(L_arm, target, lengths, conv, gamma_factor);

  std::string text;
  if (json_out) {
    io::ojson j;
    j["kind"] = "loss_curve";
    j["L_arm"] = L_arm;
    j["target_ratio"] = target;
    j["ratio_convention"] = convention_name;
    j["gamma_factor"] = gamma_factor;
    io::ojson rows = io::ojson::array();
    for (const auto& p : curve) {
      io::ojson r;
      r["L_a"] = p.L_a;
      r["eps_a"] = p.eps_a;
      r["eps_per_m"] = p.eps_per_m;
      rows.push_back(std::move(r));
    }
    j["points"] = std::move(rows);
    text = io::dump(j);
  } else {
    text += "# ratio_convention: " + convention_name + "\n";
    text += "# target_ratio: " + fmt_g(target) + "\n";
    text += "# L_arm: " + fmt_g(L_arm) + "\n";
    text += "L_a,eps_a,eps_per_m\n";
    for (const auto& p : curve)
      text += fmt_e(p.L_a) + "," + fmt_e(p.eps_a) + "," + fmt_e(p.eps_per_m) + "\n";
  }
  emit(output, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear quantum filter realization toolkit"};
  app.require_subcommand(1);

  std::string input, output;
  bool json_out = false;
  GridSpec grid;
  double tol_symplectic = 1e-8;
  RealizeFlags rflags;
  double s0_flag = 0.0;
  qfilt::SynthesisOptions synth_opts;
  double gamma_aux_flag = 0.0;
  double L_arm = 4000.0, target = 0.1, gamma_factor = 100.0;
  std::string convention = "amplitude";
  GridSpec la_grid;
  la_grid.start = 10.0;
  la_grid.stop = 100.0;
  la_grid.points = 10;

  auto add_common = [&](CLI::App* cmd, bool with_input) {
    if (with_input)
      cmd->add_option("input", input, "input JSON document")->required();
    cmd->add_option("-o,--output", output, "write output here instead of stdout");
    cmd->add_flag("--json", json_out, "machine-readable JSON output");
  };
  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--grid-start", grid.start, "first frequency (rad/s)");
    cmd->add_option("--grid-stop", grid.stop, "last frequency (rad/s)");
    cmd->add_option("--grid-points", grid.points, "number of grid points");
    cmd->add_option("--grid-scale", grid.scale, "linear or log");
  };
  auto add_realize_flags = [&](CLI::App* cmd) {
    cmd->add_option("--s0", s0_flag, "reference rate for the dimensionless construction");
    cmd->add_flag("--no-normalize", rflags.no_normalize,
                  "realize directly at physical scale");
  };

  CLI::App* c_check = app.add_subcommand("check", "symplectic + feasibility gate");
  add_common(c_check, true);
  add_grid(c_check);
  c_check->add_option("--tol-symplectic", tol_symplectic, "symplectic residual tolerance");

  CLI::App* c_realize = app.add_subcommand("realize", "physically realizable state space");
  add_common(c_realize, true);
  add_realize_flags(c_realize);

  CLI::App* c_slh = app.add_subcommand("slh", "oscillator (S, L, H) parameters");
  add_common(c_slh, true);
  add_realize_flags(c_slh);

  CLI::App* c_synth = app.add_subcommand("synth", "hardware parameter synthesis");
  add_common(c_synth, true);
  add_realize_flags(c_synth);
  c_synth->add_option("--gamma-aux", gamma_aux_flag, "auxiliary mode bandwidth (rad/s)");
  c_synth->add_option("--cavity-length", synth_opts.cavity_length, "cavity length (m)");

  CLI::App* c_sweep = app.add_subcommand("sweep", "frequency-response sweep CSV");
  add_common(c_sweep, true);
  add_grid(c_sweep);

  CLI::App* c_loss = app.add_subcommand("losscurve", "loss requirement vs cavity length");
  add_common(c_loss, false);
  c_loss->add_option("--L-arm", L_arm, "interferometer arm length (m)");
  c_loss->add_option("--target", target, "noise-to-signal target ratio at DC");
  c_loss->add_option("--convention", convention, "amplitude or power ratio");
  c_loss->add_option("--gamma-factor", gamma_factor, "auxiliary bandwidth in units of s0");
  c_loss->add_option("--La-start", la_grid.start, "first cavity length (m)");
  c_loss->add_option("--La-stop", la_grid.stop, "last cavity length (m)");
  c_loss->add_option("--La-points", la_grid.points, "number of lengths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (s0_flag > 0.0) rflags.s0_override = s0_flag;
  if (gamma_aux_flag > 0.0) synth_opts.gamma_aux = gamma_aux_flag;

  try {
    if (c_check->parsed())
      return run_check(input, output, json_out, grid, tol_symplectic);
    if (c_realize->parsed()) return run_realize(input, output, json_out, rflags);
    if (c_slh->parsed()) return run_slh(input, output, json_out, rflags);
    if (c_synth->parsed()) return run_synth(input, output, json_out, rflags, synth_opts);
    if (c_sweep->parsed()) return run_sweep(input, output, json_out, grid);
    if (c_loss->parsed())
      return run_losscurve(output, json_out, L_arm, target, convention, la_grid,
                           gamma_factor);
  } catch (const qfilt::ConditionError& e) {
    io::ojson j;
    j["kind"] = "error";
    j["condition"] = e.condition;
    j["message"] = e.what();
    std::cerr << io::dump(j);
    return 1;
  } catch (const qfilt::PoleProximityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const qfilt::SingularityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const qfilt::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qfilt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qfilt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
