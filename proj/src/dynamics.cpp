#include "qfilt/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "qfilt/errors.hpp"

namespace qfilt {

namespace {

// Frequency-domain solve of the (a, a^dag, b, b^dag) Heisenberg equations at
// s = i*omega under the e^{+st} convention, so the system reads
// (-i omega I - A) x = drive.  Columns of the returned matrix are the
// responses to the drive, a-loss creation noise, and b-loss annihilation
// noise; rows are the four operators.
Eigen::Matrix<cdouble, 4, 3> solve_modes(const TwoModeModel& model, double omega) {
  const double g = std::sqrt(model.s0 * model.gamma);
  const double ga = model.gamma_a_eps;
  Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
  A(0, 0) = -ga;
  A(0, 3) = cdouble(0.0, g);
  A(1, 1) = -ga;
  A(1, 2) = cdouble(0.0, -g);
  A(2, 1) = cdouble(0.0, g);
  A(2, 2) = -(model.gamma + model.gamma_b_eps);
  A(3, 0) = cdouble(0.0, -g);
  A(3, 3) = -(model.gamma + model.gamma_b_eps);

  Eigen::Matrix4cd M = -cdouble(0.0, omega) * Eigen::Matrix4cd::Identity() - A;
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(M);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible())
    throw SingularityError("mode equations singular at omega = " + std::to_string(omega));

  Eigen::Matrix<cdouble, 4, 3> drives = Eigen::Matrix<cdouble, 4, 3>::Zero();
  drives(2, 0) = std::sqrt(2.0 * model.gamma);                 // u into b
  drives(1, 1) = -std::sqrt(2.0 * model.gamma_a_eps);          // n_a^dag into a^dag
  drives(2, 2) = std::sqrt(2.0 * model.gamma_b_eps);           // n_b into b
  return lu.solve(drives);
}

}  // namespace

void TwoModeModel::validate() const {
  if (s0 < 0.0 || gamma_a_eps < 0.0 || gamma_b_eps < 0.0)
    throw std::invalid_argument("rates must be nonnegative");
  if (gamma <= 0.0) throw std::invalid_argument("coupling bandwidth must be positive");
}

double loss_rate_from_total_loss(double eps_total, double L) {
  if (L <= 0.0) throw std::invalid_argument("cavity length must be positive");
  if (eps_total < 0.0) throw std::invalid_argument("loss must be nonnegative");
  return eps_total * kSpeedOfLight / (4.0 * L);
}

cdouble two_mode_transfer(const TwoModeModel& model, double omega) {
  model.validate();
  TwoModeModel lossless = model;
  lossless.gamma_a_eps = 0.0;
  lossless.gamma_b_eps = 0.0;
  return lossy_transfer(lossless, omega).signal;
}

IOResponse lossy_transfer(const TwoModeModel& model, double omega) {
  model.validate();
  IOResponse io;
  io.omega = omega;

  const Eigen::Matrix<cdouble, 4, 3> x = solve_modes(model, omega);
  const double out = std::sqrt(2.0 * model.gamma);
  io.signal = out * x(2, 0) - 1.0;  // y = sqrt(2 gamma) b - u
  io.noise_a = out * x(2, 1);
  io.noise_b = out * x(2, 2);

  const double ga = model.gamma_a_eps;
  const cdouble den(omega, ga - model.s0);
  if (std::abs(den) > 0.0) {
    io.signal_formula = cdouble(omega, ga + model.s0) / den;
    io.noise_a_formula = 2.0 * std::sqrt(model.s0 * ga) / den;
    io.noise_b_formula = 2.0 * std::sqrt(model.gamma_b_eps / model.gamma) *
                         cdouble(omega, ga) / den;
  }
  io.signal_diff = std::abs(io.signal - io.signal_formula);
  io.noise_a_diff = std::abs(std::abs(io.noise_a) - std::abs(io.noise_a_formula));
  io.noise_b_diff = std::abs(std::abs(io.noise_b) - std::abs(io.noise_b_formula));
  return io;
}

NoiseRatio noise_ratio_b_over_a(const TwoModeModel& model, double omega) {
  model.validate();
  if (model.gamma_a_eps <= 0.0)
    throw std::invalid_argument("noise ratio undefined without a-mode loss");
  NoiseRatio nr;
  nr.formula = omega * omega * model.gamma_b_eps /
               (model.s0 * model.gamma * model.gamma_a_eps);
  const IOResponse io = lossy_transfer(model, omega);
  const double na = std::norm(io.noise_a);
  nr.full = na > 0.0 ? std::norm(io.noise_b) / na : 0.0;
  return nr;
}

cdouble dpa_exact_io(double R, double r, double L, double omega, bool phase_quadrature) {
  if (R <= 0.0 || R >= 1.0) throw std::invalid_argument("reflectivity must be in (0, 1)");
  if (L <= 0.0) throw std::invalid_argument("cavity length must be positive");
  const double reff = phase_quadrature ? -r : r;
  const cdouble loop =
      std::exp(cdouble(2.0 * reff, 0.0)) *
      std::exp(cdouble(0.0, 2.0 * omega * L / kSpeedOfLight));
  const double sr = std::sqrt(R);
  const cdouble den = 1.0 - sr * loop;
  if (std::abs(den) < 1e-12)
    throw SingularityError("propagation denominator at threshold");
  return (-sr + loop) / den;
}

cdouble dpa_adiabatic_io(double gamma, double s0, double omega, bool phase_quadrature) {
  if (gamma <= 0.0) throw std::invalid_argument("bandwidth must be positive");
  if (s0 < 0.0) throw std::invalid_argument("rate must be nonnegative");
  const double g = phase_quadrature ? -std::sqrt(s0 * gamma) : std::sqrt(s0 * gamma);
  const cdouble den(gamma - g, -omega);
  if (std::abs(den) < 1e-12)
    throw SingularityError("cavity denominator at threshold");
  return cdouble(gamma + g, omega) / den;
}

std::vector<LossCurvePoint> loss_requirement_curve(double L_arm, double target_ratio,
                                                   const std::vector<double>& La_grid,
                                                   RatioConvention convention,
                                                   double gamma_factor) {
  if (L_arm <= 0.0) throw std::invalid_argument("arm length must be positive");
  if (target_ratio <= 0.0 || target_ratio >= 1.0)
    throw std::invalid_argument("target ratio must be in (0, 1)");
  if (gamma_factor <= 0.0) throw std::invalid_argument("gamma factor must be positive");

  const double s0 = kSpeedOfLight / L_arm;

  std::vector<LossCurvePoint> curve;
  curve.reserve(La_grid.size());
  for (double La : La_grid) {
    if (La <= 0.0) throw std::invalid_argument("cavity length must be positive");
    auto ratio_at = [&](double eps) {
      TwoModeModel model;
      model.s0 = s0;
      model.gamma = gamma_factor * s0;
      model.gamma_a_eps = loss_rate_from_total_loss(eps, La);
      model.gamma_b_eps = 0.0;
      const IOResponse io = lossy_transfer(model, 0.0);
      const double amp = std::abs(io.noise_a) / std::abs(io.signal);
      return convention == RatioConvention::kAmplitude ? amp : amp * amp;
    };
    // The DC ratio grows monotonically with loss while gamma_a < s0; the mode
    // equations turn singular at gamma_a = s0 (threshold of the negative
    // dispersion), so bracket strictly below that point.
    double lo = 0.0;
    double hi = 2.0 * La * s0 / kSpeedOfLight;  // gamma_a = s0/2
    if (ratio_at(hi) < target_ratio)
      throw std::invalid_argument("target ratio unreachable below the instability threshold");
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ratio_at(mid) < target_ratio ? lo : hi) = mid;
    }
    LossCurvePoint pt;
    pt.L_a = La;
    pt.eps_a = 0.5 * (lo + hi);
    pt.eps_per_m = pt.eps_a / La;
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace qfilt
