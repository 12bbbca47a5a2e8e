#pragma once

#include <optional>
#include <vector>

#include "qfilt/statespace.hpp"
#include "qfilt/synthesis.hpp"

namespace qfilt {

// Filter cavity a coupled to auxiliary cavity b through the two-mode
// squeezing Hamiltonian, b open to the drive port; optional intracavity
// losses on both modes.
struct TwoModeModel {
  double s0 = 0.0;           // negative-dispersion rate (gamma_neg), rad/s
  double gamma = 0.0;        // auxiliary bandwidth, rad/s
  double gamma_a_eps = 0.0;  // a-mode loss rate, rad/s
  double gamma_b_eps = 0.0;  // b-mode loss rate, rad/s
  std::optional<double> L_a; // meters; only for loss <-> rate conversion
  std::optional<double> L_b;

  void validate() const;
};

// Loss rate of a cavity with round-trip (total) loss eps and length L:
// eps * c / (4 L), mirroring the bandwidth formula gamma = T c/(4L).
double loss_rate_from_total_loss(double eps_total, double L);

// Input-output coefficients at one sideband frequency.  The *_formula fields
// are the first-order closed forms; the plain fields come from the exact
// four-operator solve.  noise_a is the coefficient of the a-loss creation
// noise, noise_b of the b-loss annihilation noise.
struct IOResponse {
  double omega = 0.0;
  cdouble signal{0.0};
  cdouble noise_a{0.0};
  cdouble noise_b{0.0};
  cdouble signal_formula{0.0};
  cdouble noise_a_formula{0.0};
  cdouble noise_b_formula{0.0};
  double signal_diff = 0.0;   // |signal - signal_formula|
  double noise_a_diff = 0.0;  // ||noise_a| - |noise_a_formula||
  double noise_b_diff = 0.0;
};

// Exact lossless drive-to-output coefficient (losses forced to zero).
// Throws SingularityError at frequencies where the mode equations are
// singular.
cdouble two_mode_transfer(const TwoModeModel& model, double omega);

IOResponse lossy_transfer(const TwoModeModel& model, double omega);

// Ratio of b-loss to a-loss noise power in the output.  formula is
// omega^2 gamma_b / (s0 gamma gamma_a); full is |noise_b|^2/|noise_a|^2 from
// the exact solve.
struct NoiseRatio {
  double formula = 0.0;
  double full = 0.0;
};

NoiseRatio noise_ratio_b_over_a(const TwoModeModel& model, double omega);

// Amplitude-quadrature reflection of a single-ended squeezing cavity:
// exact propagation form in mirror reflectivity R, single-pass squeezing r,
// length L; and the adiabatic cavity-mode form in (gamma, s0).  The
// phase-quadrature flag conjugates the pump (r -> -r).
cdouble dpa_exact_io(double R, double r, double L, double omega,
                     bool phase_quadrature = false);
cdouble dpa_adiabatic_io(double gamma, double s0, double omega,
                         bool phase_quadrature = false);

// Convention for the noise-to-signal target of the loss curve.  The commonly
// quoted loss density for a 1/10 target corresponds to the amplitude
// convention (power would be 1/100).
enum class RatioConvention { kAmplitude, kPower };

struct LossCurvePoint {
  double L_a = 0.0;       // meters
  double eps_a = 0.0;     // total cavity loss (dimensionless)
  double eps_per_m = 0.0; // eps_a / L_a
};

// For each filter-cavity length, the total loss eps_a at which the DC
// noise-to-signal ratio of the full lossy solve reaches target_ratio, with
// s0 = c/L_arm and gamma = gamma_factor * s0.
std::vector<LossCurvePoint> loss_requirement_curve(double L_arm, double target_ratio,
                                                   const std::vector<double>& La_grid,
                                                   RatioConvention convention,
                                                   double gamma_factor = 100.0);

}  // namespace qfilt
