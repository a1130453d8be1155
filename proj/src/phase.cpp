#include "hetphase/phase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetphase/errors.hpp"
#include "hetphase/quadrature.hpp"
#include "hetphase/special_fn.hpp"

namespace hetphase {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Density as a function of the offset u = phi - theta; evaluating through
// the offset keeps the mirror symmetry u <-> -u exact.
double density_centered(double u, const HeterodyneModel& model) {
  const double d2 = variance(model.p(), model.eta());
  const double a = std::abs(model.w());
  const double uniform = std::exp(-a * a / d2) / (2.0 * kPi);
  if (a == 0.0) return uniform;
  const double delta = std::sqrt(d2);
  const double c = std::cos(u), s = std::sin(u);
  const double y = a * c / delta;
  const double bracket = (y >= 0.0) ? 1.0 + erf(y) : erfc(-y);
  return uniform +
         (a / (kPi * delta)) * c * (0.5 * kSqrtPi) * bracket * std::exp(-(a * a / d2) * s * s);
}

// Breakpoints clustered around the peak at u = 0 so the adaptive rule
// cannot step over a density spike much narrower than the period.
std::vector<double> centered_breakpoints(const HeterodyneModel& model) {
  const double a = std::abs(model.w());
  double scale = kPi / 4.0;
  if (a > 0.0) {
    const double width = std::sqrt(variance(model.p(), model.eta())) / (std::sqrt(2.0) * a);
    scale = std::clamp(width, 1e-9, kPi / 4.0);
  }
  std::vector<double> right{0.0};
  for (double b = scale; b < kPi; b *= 2.0) right.push_back(b);
  right.push_back(kPi);
  std::vector<double> pts;
  for (auto it = right.rbegin(); it != right.rend(); ++it)
    if (*it != 0.0) pts.push_back(-*it);
  pts.insert(pts.end(), right.begin(), right.end());
  return pts;
}

double wrap_to_pi(double x) {
  double y = std::fmod(x, 2.0 * kPi);
  if (y <= -kPi)
    y += 2.0 * kPi;
  else if (y > kPi)
    y -= 2.0 * kPi;
  return y;
}

} // namespace

double phase_density(double phi, const HeterodyneModel& model) {
  require(std::isfinite(phi), "phase_density: phi must be finite");
  const double theta = std::arg(model.w());
  return density_centered(phi - theta, model);
}

bool gaussian_regime_ok(const HeterodyneModel& model) {
  const double a = std::abs(model.w());
  if (a == 0.0) return false;
  return std::sqrt(variance(model.p(), model.eta())) / a <= 0.2;
}

double phase_density_gaussian(double phi, const HeterodyneModel& model) {
  require(std::isfinite(phi), "phase_density_gaussian: phi must be finite");
  if (!gaussian_regime_ok(model))
    throw std::domain_error("phase_density_gaussian: outside the regime D/|w| <= 0.2");
  const double d2 = variance(model.p(), model.eta());
  const double a = std::abs(model.w());
  const double u = phi - std::arg(model.w());
  return a / (kSqrtPi * std::sqrt(d2)) * std::exp(-(a * a / d2) * u * u);
}

double phase_rms_gaussian(const HeterodyneModel& model) {
  const double a = std::abs(model.w());
  require(a > 0.0, "phase_rms_gaussian: zero-signal input rejected");
  return std::sqrt(variance(model.p(), model.eta())) / (std::sqrt(2.0) * a);
}

double phase_rms_exact(const HeterodyneModel& model) {
  const std::vector<double> pts = centered_breakpoints(model);
  const auto integrand = [&](double u) { return u * u * density_centered(u, model); };
  const double second_moment = integrate_segments(integrand, pts, 1e-10);
  return std::sqrt(std::max(second_moment, 0.0));
}

PhaseDistribution make_phase_distribution(const HeterodyneModel& model, int points) {
  require(points >= 2, "make_phase_distribution: need at least two grid points");
  PhaseDistribution dist;
  dist.theta = std::arg(model.w());
  dist.grid.resize(points);
  dist.density.resize(points);
  const double h = 2.0 * kPi / points;
  for (int j = 0; j < points; ++j) {
    const double u = -kPi + (j + 1) * h; // grid spans (theta - pi, theta + pi]
    dist.grid[j] = dist.theta + u;
    dist.density[j] = density_centered(u, model);
  }
  return dist;
}

SensitivityResult optimize_signal_split(double nbar, double eta) {
  require(std::isfinite(nbar) && nbar > 0.0, "optimize_signal_split: infeasible budget");
  require(eta > 0.0 && eta <= 1.0, "optimize_signal_split: eta must lie in (0, 1]");

  const auto objective = [&](double s) {
    const double twin_photons = (1.0 - s) * nbar;
    const double lambda = std::sqrt(twin_photons / (twin_photons + 2.0));
    return std::sqrt(variance(TwinBeamParam(lambda), eta) / (2.0 * s * nbar));
  };

  constexpr double kGolden = 0.61803398874989485;
  double a = 1e-12, b = 1.0 - 1e-12;
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > 1e-6) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = objective(d);
    }
  }
  const double s_opt = 0.5 * (a + b);

  SensitivityResult res;
  res.nbar = nbar;
  res.w_sq_opt = s_opt * nbar;
  const double twin_photons = (1.0 - s_opt) * nbar;
  res.lambda_opt = std::sqrt(twin_photons / (twin_photons + 2.0));
  const TwinBeamParam p(res.lambda_opt);
  res.gain = p.gain();
  const HeterodyneModel at_opt(p, Amplitude(std::sqrt(res.w_sq_opt), 0.0), eta);
  res.delta_phi_gauss = phase_rms_gaussian(at_opt);
  res.delta_phi_exact = phase_rms_exact(at_opt);
  res.product = res.delta_phi_gauss * nbar;
  return res;
}

double shot_noise_limit(double nbar, double eta) {
  require(std::isfinite(nbar) && nbar > 0.0, "shot_noise_limit: nbar must be positive");
  require(eta > 0.0 && eta < 1.0,
          "shot_noise_limit: defined only for nonunit efficiency eta in (0, 1)");
  return std::sqrt((1.0 - eta) / (2.0 * nbar));
}

GainTuning gain_tuning(double nbar) {
  require(std::isfinite(nbar) && nbar > 4.0, "gain_tuning: requires nbar > 4");
  GainTuning out;
  out.gain = 0.25 * nbar;
  out.lambda = std::sqrt(1.0 - 1.0 / out.gain);
  out.eta_threshold = 2.0 / nbar;
  return out;
}

PhaseEstimate estimate_phase(const SampleBatch& batch) {
  require(batch.count >= 2, "estimate_phase: need at least two samples");
  require(static_cast<std::int64_t>(batch.outcomes.size()) == batch.count,
          "estimate_phase: outcome count mismatch");
  std::complex<long double> resultant(0.0L, 0.0L);
  for (const Amplitude& z : batch.outcomes)
    resultant += static_cast<std::complex<long double>>(z);
  if (resultant == std::complex<long double>(0.0L, 0.0L))
    throw std::domain_error("estimate_phase: zero resultant, angle undefined");
  const double theta_hat =
      std::atan2(static_cast<double>(resultant.imag()), static_cast<double>(resultant.real()));
  long double acc = 0.0L;
  for (const Amplitude& z : batch.outcomes) {
    const double d = wrap_to_pi(std::arg(z) - theta_hat);
    acc += static_cast<long double>(d) * d;
  }
  const double rms = std::sqrt(static_cast<double>(acc / (batch.count - 1)));
  return PhaseEstimate{theta_hat, rms};
}

} // namespace hetphase
