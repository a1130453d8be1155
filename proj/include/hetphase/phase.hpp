#pragma once

#include <vector>

#include "hetphase/heterodyne.hpp"

namespace hetphase {

/// Sampled phase density on a uniform grid over (theta - pi, theta + pi],
/// theta = arg w.
struct PhaseDistribution {
  double theta = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
};

/// Outcome of the fixed-photon-budget sensitivity optimization.
struct SensitivityResult {
  double nbar = 0.0;
  double w_sq_opt = 0.0;       ///< optimal signal photons |w|^2
  double lambda_opt = 0.0;
  double delta_phi_gauss = 0.0; ///< Gaussian-regime r.m.s. sensitivity
  double delta_phi_exact = 0.0; ///< quadrature of the exact phase density
  double gain = 0.0;            ///< (1 - lambda_opt^2)^{-1}
  double product = 0.0;         ///< delta_phi_gauss * nbar
};

/// Marginal phase density
///   p(phi) = e^{-|w|^2/D^2}/(2 pi)
///          + (|w|/(pi D)) cos(phi-theta) (sqrt(pi)/2)
///            [1 + erf(|w| cos(phi-theta)/D)] e^{-(|w|^2/D^2) sin^2(phi-theta)},
/// with D^2 = variance(lambda, eta) and theta = arg w. Uniform 1/(2 pi)
/// at zero signal.
double phase_density(double phi, const HeterodyneModel& model);

/// Whether the Gaussian approximation regime D/|w| <= 0.2 holds.
bool gaussian_regime_ok(const HeterodyneModel& model);

/// Gaussian limit (|w|/(sqrt(pi) D)) exp[-(|w|^2/D^2)(phi-theta)^2].
/// Throws std::domain_error outside the regime guard.
double phase_density_gaussian(double phi, const HeterodyneModel& model);

/// Gaussian-regime r.m.s. sensitivity D/(sqrt(2) |w|); rejects |w| = 0.
double phase_rms_gaussian(const HeterodyneModel& model);

/// Exact r.m.s. sqrt(integral (phi-theta)^2 p(phi) dphi) over one period,
/// by adaptive quadrature to 1e-10 absolute on the integral.
double phase_rms_exact(const HeterodyneModel& model);

/// Tabulate the density on `points` uniform grid points over
/// (theta - pi, theta + pi].
PhaseDistribution make_phase_distribution(const HeterodyneModel& model, int points);

/// Minimize the Gaussian-regime sensitivity over the photon split
/// |w|^2 = s nbar, twin-beam photons = (1-s) nbar, by golden-section
/// search on s (tolerance 1e-6); the exact quadrature value at the optimum
/// is reported alongside.
SensitivityResult optimize_signal_split(double nbar, double eta);

/// Inefficiency-dominated sensitivity floor sqrt((1-eta)/(2 nbar));
/// rejects eta = 1, where this regime does not exist.
double shot_noise_limit(double nbar, double eta);

/// Amplifier tuning that realizes the optimal split at a given budget:
/// gain nbar/4, the corresponding lambda, and the efficiency headroom
/// 2/nbar the detector must beat.
struct GainTuning {
  double gain = 0.0;
  double lambda = 0.0;
  double eta_threshold = 0.0;
};
GainTuning gain_tuning(double nbar);

/// Circular phase estimate from a sample batch: resultant-vector angle and
/// the sample standard deviation of the wrapped residuals.
struct PhaseEstimate {
  double theta_hat = 0.0;
  double rms = 0.0;
};
PhaseEstimate estimate_phase(const SampleBatch& batch);

} // namespace hetphase
