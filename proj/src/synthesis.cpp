#include "qfilt/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "qfilt/errors.hpp"

namespace qfilt {

NetworkDecomposition decompose_network(const GeneralizedOpenOscillator& goo) {
  goo.validate();
  NetworkDecomposition dec;
  for (int k = 0; k < goo.n; ++k) {
    GeneralizedOpenOscillator one = GeneralizedOpenOscillator::sized(1, goo.m);
    one.K = goo.K.middleCols(2 * k, 2);
    one.Omega = goo.Omega.block(2 * k, 2 * k, 2, 2);
    const bool coupled = one.K.norm() > 1e-14 * std::max(1.0, goo.K.norm());
    if (coupled) {
      // Scattering belongs to the head of the series chain; later stages see
      // already-scattered fields.
      one.S = dec.series_order.empty()
                  ? goo.S
                  : Eigen::MatrixXcd::Identity(goo.m, goo.m);
      dec.series_order.push_back(k);
    }
    dec.modes.push_back(std::move(one));
  }
  for (int k = 0; k < goo.n; ++k)
    for (int l = k + 1; l < goo.n; ++l) {
      const Eigen::Matrix2cd blk = goo.Omega.block(2 * k, 2 * l, 2, 2);
      InteractionTerm term;
      term.mode_k = k;
      term.mode_l = l;
      term.eps2 = blk(0, 0) + std::conj(blk(1, 1));
      term.eps1 = blk(0, 1) + std::conj(blk(1, 0));
      if (std::abs(term.eps1) > 1e-14 * std::max(1.0, goo.Omega.norm()) ||
          std::abs(term.eps2) > 1e-14 * std::max(1.0, goo.Omega.norm()))
        dec.interactions.push_back(term);
    }
  return dec;
}

CouplingRealization realize_coupling(const Eigen::RowVector2cd& k_row, double gamma_aux) {
  if (gamma_aux <= 0.0) throw std::invalid_argument("auxiliary bandwidth must be positive");
  CouplingRealization cr;
  cr.alpha = k_row(0);
  cr.beta = k_row(1);
  if (std::abs(cr.alpha) == 0.0 && std::abs(cr.beta) == 0.0) return cr;
  const double root = std::sqrt(gamma_aux / 2.0);
  cr.eps2 = -std::conj(cr.alpha) * root;
  cr.eps1 = cr.beta * root;
  cr.mixing_angle = 0.5 * std::abs(cr.eps2);
  cr.phase = std::abs(cr.eps2) == 0.0 ? 0.0 : -std::arg(cr.eps2);
  cr.has_aux = true;
  return cr;
}

InternalRealization realize_internal(const Eigen::Matrix2cd& omega_block) {
  if ((omega_block - omega_block.adjoint()).norm() >
      1e-9 * std::max(1.0, omega_block.norm()))
    throw std::invalid_argument("internal Hamiltonian block must be Hermitian");
  InternalRealization ir;
  ir.detuning = (omega_block(0, 0) + omega_block(1, 1)).real();
  ir.pump = omega_block(0, 1);
  return ir;
}

InteractionHardware realize_interaction(const InteractionTerm& term) {
  InteractionHardware hw;
  hw.mixing_angle = 0.5 * std::abs(term.eps2);
  hw.phase = std::abs(term.eps2) == 0.0 ? 0.0 : -std::arg(term.eps2);
  hw.pump = cdouble(0.0, -2.0) * term.eps1;
  return hw;
}

CrystalMapping map_crystal_params(double rate, double L, double T) {
  if (L <= 0.0) throw std::invalid_argument("cavity length must be positive");
  if (T < 0.0 || T >= 1.0) throw std::invalid_argument("transmissivity must be in [0, 1)");
  if (rate < 0.0) throw std::invalid_argument("rate must be nonnegative");
  CrystalMapping cm;
  cm.gamma = T * kSpeedOfLight / (4.0 * L);
  cm.r = 2.0 * std::sqrt(rate * cm.gamma) * L / kSpeedOfLight;
  cm.r_consistency = std::sqrt(T * L * rate / kSpeedOfLight);
  return cm;
}

double required_squeezing(double T_b, double L_b, double L_arm) {
  if (T_b <= 0.0 || L_b <= 0.0 || L_arm <= 0.0)
    throw std::invalid_argument("required_squeezing needs positive inputs");
  return std::sqrt(T_b * L_b / L_arm);
}

PhysicalRealization synthesize(const GeneralizedOpenOscillator& goo,
                               const SynthesisOptions& opts) {
  NetworkDecomposition dec = decompose_network(goo);

  double gamma_aux;
  if (opts.gamma_aux) {
    gamma_aux = *opts.gamma_aux;
    if (gamma_aux <= 0.0) throw std::invalid_argument("auxiliary bandwidth must be positive");
  } else {
    // Stand-in for "100x the analysis band": the largest rate appearing in
    // the model (coupling rates |K|^2/2, Hamiltonian entries), floor 1.
    double top = 1.0;
    for (int j = 0; j < goo.K.rows(); ++j)
      for (int p = 0; p < goo.K.cols(); ++p)
        top = std::max(top, 0.5 * std::norm(goo.K(j, p)));
    top = std::max(top, goo.Omega.cwiseAbs().maxCoeff());
    gamma_aux = 100.0 * top;
  }

  PhysicalRealization phys;
  phys.series_order = dec.series_order;
  phys.interactions = dec.interactions;
  for (const InteractionTerm& t : dec.interactions)
    phys.interaction_hardware.push_back(realize_interaction(t));

  const double L = opts.cavity_length;
  for (int k = 0; k < goo.n; ++k) {
    const GeneralizedOpenOscillator& one = dec.modes[size_t(k)];
    const InternalRealization internal = realize_internal(one.Omega);

    // One realization per nonzero coupling row; a fully uncoupled mode still
    // gets an entry carrying its internal hardware.
    std::vector<int> rows;
    for (int j = 0; j < goo.m; ++j)
      if (one.K.row(j).norm() > 1e-14 * std::max(1.0, goo.K.norm())) rows.push_back(j);
    if (rows.empty()) rows.push_back(-1);

    for (int j : rows) {
      OneModeRealization r;
      r.mode_id = k;
      r.channel = std::max(j, 0);
      r.detuning = internal.detuning;
      r.internal_pump = internal.pump;
      if (j >= 0) {
        const CouplingRealization cr =
            realize_coupling(Eigen::RowVector2cd(one.K(j, 0), one.K(j, 1)), gamma_aux);
        r.coupling_alpha = cr.alpha;
        r.coupling_beta = cr.beta;
        r.pump_intensity_1 = cr.eps1;
        r.pump_intensity_2 = cr.eps2;
        r.mixing_angle = cr.mixing_angle;
        r.phase = cr.phase;
        r.has_aux = cr.has_aux;
        r.aux_bandwidth = cr.has_aux ? gamma_aux : 0.0;
      }
      phys.oscillators.push_back(r);

      CrystalSpec cs;
      cs.L_cav = L;
      cs.T_mirror = r.has_aux ? 4.0 * L * gamma_aux / kSpeedOfLight : 0.0;
      // The crystal realizes the squeezing-type pump of this stage: the
      // mode-to-auxiliary eps1 when present, otherwise the internal DPA pump.
      const double pump_mag =
          r.has_aux && std::abs(r.pump_intensity_1) > 0.0 ? std::abs(r.pump_intensity_1)
                                                          : std::abs(r.internal_pump);
      cs.r = 2.0 * pump_mag * L / kSpeedOfLight;
      phys.crystal_params.push_back(cs);
    }
  }
  return phys;
}

ReconstructedNetwork reconstruct_network(const NetworkDecomposition& dec, int n, int m) {
  if (static_cast<int>(dec.modes.size()) != n)
    throw std::invalid_argument("decomposition mode count does not match n");
  ReconstructedNetwork net;
  net.Omega = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  net.K = Eigen::MatrixXcd::Zero(m, 2 * n);
  for (int k = 0; k < n; ++k) {
    net.Omega.block(2 * k, 2 * k, 2, 2) = dec.modes[size_t(k)].Omega;
    net.K.middleCols(2 * k, 2) = dec.modes[size_t(k)].K;
  }
  for (const InteractionTerm& t : dec.interactions) {
    Eigen::Matrix2cd blk;
    blk << 0.5 * t.eps2, 0.5 * t.eps1, 0.5 * std::conj(t.eps1), 0.5 * std::conj(t.eps2);
    net.Omega.block(2 * t.mode_k, 2 * t.mode_l, 2, 2) = blk;
    net.Omega.block(2 * t.mode_l, 2 * t.mode_k, 2, 2) = blk.adjoint();
  }
  return net;
}

}  // namespace qfilt
