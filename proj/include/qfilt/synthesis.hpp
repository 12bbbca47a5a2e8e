#pragma once

#include <optional>
#include <vector>

#include "qfilt/oscillator.hpp"

namespace qfilt {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Hardware parameters for one internal mode: detuned DPA for the internal
// Hamiltonian plus an auxiliary-mode coupling stage for the bath coupling
// row L = alpha*a + beta*a^dag.  Pump intensities follow
// alpha = -conj(eps2) sqrt(2/gamma), beta = eps1 sqrt(2/gamma).
struct OneModeRealization {
  int mode_id = 0;
  int channel = 0;  // input channel whose coupling row this stage realizes
  double detuning = 0.0;          // rad/s
  cdouble internal_pump{0.0};     // DPA pump epsilon, rad/s
  cdouble coupling_alpha{0.0};
  cdouble coupling_beta{0.0};
  double aux_bandwidth = 0.0;     // gamma, rad/s
  double mixing_angle = 0.0;      // |eps2|/2, rate-like (see README on units)
  double phase = 0.0;             // -arg(eps2), radians
  cdouble pump_intensity_1{0.0};  // eps1
  cdouble pump_intensity_2{0.0};  // eps2
  bool has_aux = false;
};

// Direct interaction H_kl = hbar(eps2 a_k^dag a_l + conj(eps2) a_k a_l^dag
//                            + eps1 a_k^dag a_l^dag + conj(eps1) a_k a_l).
struct InteractionTerm {
  int mode_k = 0;
  int mode_l = 0;
  cdouble eps1{0.0};
  cdouble eps2{0.0};
};

// Beamsplitter plus pumped-crystal settings realizing one InteractionTerm.
struct InteractionHardware {
  double mixing_angle = 0.0;  // |eps2|/2
  double phase = 0.0;         // -arg(eps2)
  cdouble pump{0.0};          // -2i eps1
};

struct CrystalSpec {
  double r = 0.0;        // single-pass squeezing factor
  double L_cav = 0.0;    // meters
  double T_mirror = 0.0; // transmissivity
};

struct PhysicalRealization {
  std::vector<OneModeRealization> oscillators;
  std::vector<InteractionTerm> interactions;
  std::vector<InteractionHardware> interaction_hardware;  // parallel to interactions
  std::vector<int> series_order;
  std::vector<CrystalSpec> crystal_params;  // parallel to oscillators
};

// Split an n-mode oscillator into one-mode oscillators (diagonal Omega
// blocks, row-restricted K, S carried by the first mode in the chain) plus
// direct interactions from the off-diagonal Omega blocks.
struct NetworkDecomposition {
  std::vector<GeneralizedOpenOscillator> modes;  // each with n = 1
  std::vector<InteractionTerm> interactions;
  std::vector<int> series_order;  // modes with nonzero coupling rows, in order
};

NetworkDecomposition decompose_network(const GeneralizedOpenOscillator& goo);

// Auxiliary-mode coupling stage for one coupling row (alpha, beta).  A zero
// row yields has_aux = false and no hardware.
struct CouplingRealization {
  cdouble alpha{0.0};
  cdouble beta{0.0};
  cdouble eps1{0.0};
  cdouble eps2{0.0};
  double mixing_angle = 0.0;
  double phase = 0.0;
  bool has_aux = false;
};

CouplingRealization realize_coupling(const Eigen::RowVector2cd& k_row, double gamma_aux);

// Detuned-DPA parameters of a 2x2 internal Hamiltonian block:
// detuning from the a^dag a coefficient, pump from the (a^dag)^2 one.
struct InternalRealization {
  double detuning = 0.0;
  cdouble pump{0.0};
};

InternalRealization realize_internal(const Eigen::Matrix2cd& omega_block);

InteractionHardware realize_interaction(const InteractionTerm& term);

// Mirror/crystal mapping gamma = T c/(4L) and r = 2 sqrt(rate*gamma) L/c.
// r_consistency carries the algebraically identical sqrt(T L rate / c) form.
struct CrystalMapping {
  double gamma = 0.0;
  double r = 0.0;
  double r_consistency = 0.0;
};

CrystalMapping map_crystal_params(double rate, double L, double T);

// Single-pass squeezing factor needed by the filter realization:
// sqrt(T_b L_b / L_arm), all lengths in meters, T_b dimensionless.
double required_squeezing(double T_b, double L_b, double L_arm);

struct SynthesisOptions {
  std::optional<double> gamma_aux;  // default: 100x the largest system rate
  double cavity_length = 0.24;      // meters
};

// Full hardware assembly: decompose, realize each mode and interaction, and
// attach crystal parameters for the given cavity length.
PhysicalRealization synthesize(const GeneralizedOpenOscillator& goo,
                               const SynthesisOptions& opts = {});

// Inverse used by tests and reports: Omega and K of the network described by
// a decomposition (canonical pair-symmetric gauge for interaction blocks).
struct ReconstructedNetwork {
  Eigen::MatrixXcd Omega;
  Eigen::MatrixXcd K;
};

ReconstructedNetwork reconstruct_network(const NetworkDecomposition& dec, int n, int m);

}  // namespace qfilt
