#include "hetphase/verify.hpp"

#include <cmath>
#include <sstream>

#include "hetphase/fock.hpp"
#include "hetphase/heterodyne.hpp"
#include "hetphase/phase.hpp"
#include "hetphase/rng.hpp"
#include "hetphase/special_fn.hpp"

namespace hetphase {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct WorstTracker {
  double ratio = 0.0;
  std::string where;

  void update(double err, double tol, const std::string& where_str) {
    const double r = err / tol;
    if (r > ratio) {
      ratio = r;
      where = where_str;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

SuiteResult hermite_laguerre_suite() {
  WorstTracker worst;
  // 100 fixed pseudorandom shift pairs in [-2, 2]^2, shared by all orders.
  std::vector<std::pair<double, double>> shifts;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const double y = -2.0 + 4.0 * (detail::splitmix64_at(0x484cu, 2 * k) >> 11) * 0x1p-53;
    const double t = -2.0 + 4.0 * (detail::splitmix64_at(0x484cu, 2 * k + 1) >> 11) * 0x1p-53;
    shifts.emplace_back(y, t);
  }
  for (int n = 0; n <= 20; ++n) {
    for (int alpha = 0; alpha <= 10; ++alpha) {
      for (const auto& [y, t] : shifts) {
        const HermiteLaguerreCheck chk = check_hermite_laguerre(n, alpha, y, t);
        const double scale = std::max(std::abs(chk.lhs), std::abs(chk.rhs));
        const double rel = scale == 0.0 ? 0.0 : std::abs(chk.lhs - chk.rhs) / scale;
        worst.update(rel, 1e-8,
                     "n=" + std::to_string(n) + " alpha=" + std::to_string(alpha) +
                         " y=" + fmt(y) + " t=" + fmt(t));
      }
    }
  }
  return SuiteResult{"hermite-laguerre-identity", worst.ratio <= 1.0, worst.ratio, worst.where};
}

SuiteResult series_closed_suite() {
  WorstTracker worst;
  for (double lambda : {0.0, 0.25, 0.5, 0.75, 0.9}) {
    const HeterodyneModel model(TwinBeamParam(lambda), Amplitude(0.0, 0.0), 1.0);
    for (int i = 0; i <= 16; ++i) {
      const double d = 0.25 * i;
      const Amplitude z(d, 0.0);
      const double series = density_series(z, model, 1e-10);
      const double closed = density_closed(z, model);
      worst.update(std::abs(series / closed - 1.0), 1e-8,
                   "lambda=" + fmt(lambda) + " |z-w|=" + fmt(d));
    }
  }
  return SuiteResult{"series-vs-closed-density", worst.ratio <= 1.0, worst.ratio, worst.where};
}

SuiteResult fock_moment_suite(const VerifyOptions& opts) {
  WorstTracker worst;
  for (double lambda : {0.0, 0.3, 0.6, 0.9}) {
    const TwinBeamParam p(lambda);
    for (double wmag : {0.0, 1.0, 2.0}) {
      const Amplitude w(wmag, 0.0);
      const int cutoff = cutoff_for(p, w, 1e-8);
      const TwoModeFockState state = displace_signal(twin_beams(p, cutoff), w, 1e-8);
      const ZMoments moments = z_moments(state, 1e-8);
      const double expected_var =
          (1.0 - lambda) / (1.0 + lambda) + opts.variance_perturbation;
      const std::string where = "lambda=" + fmt(lambda) + " |w|=" + fmt(wmag);
      worst.update(std::abs(moments.second_central - expected_var), 1e-4, "variance " + where);
      worst.update(std::abs(moments.mean - w), 1e-4, "mean " + where);
      worst.update(std::abs(mean_photons(state) - mean_photons_analytic(p, w)), 1e-5,
                   "photons " + where);
    }
  }
  return SuiteResult{"fock-moment-oracle", worst.ratio <= 1.0, worst.ratio, worst.where};
}

// 2-D polar trapezoid of the closed-form density over a disk of radius
// 6 Delta; the integrand is periodic in the angle (spectrally accurate
// there) and smooth radially.
double disk_integral(const HeterodyneModel& model) {
  const double delta = std::sqrt(variance(model.p(), model.eta()));
  const double radius = 6.0 * delta;
  const int n_r = 12000, n_phi = 64;
  const double h_r = radius / n_r;
  const double h_phi = 2.0 * kPi / n_phi;
  double total = 0.0;
  for (int i = 0; i <= n_r; ++i) {
    const double r = i * h_r;
    const double edge = (i == 0 || i == n_r) ? 0.5 : 1.0;
    double ring = 0.0;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = j * h_phi;
      ring += density_closed(model.w() + Amplitude(r * std::cos(phi), r * std::sin(phi)), model);
    }
    total += edge * r * ring;
  }
  return total * h_r * h_phi;
}

SuiteResult normalization_suite() {
  WorstTracker worst;
  for (double lambda : {0.0, 0.5, 0.9}) {
    for (double eta : {1.0, 0.8}) {
      for (Amplitude w : {Amplitude(0.0, 0.0), Amplitude(2.0, 0.0), Amplitude(1.0, 1.0)}) {
        const HeterodyneModel model(TwinBeamParam(lambda), w, eta);
        worst.update(std::abs(disk_integral(model) - 1.0), 1e-6,
                     "density lambda=" + fmt(lambda) + " eta=" + fmt(eta) + " |w|=" +
                         fmt(std::abs(w)));
      }
    }
  }
  for (double lambda : {0.0, 0.5, 0.9, 0.99}) {
    for (double eta : {1.0, 0.8}) {
      for (double wmag : {0.0, 0.5, 2.0, 10.0}) {
        const HeterodyneModel model(TwinBeamParam(lambda), Amplitude(wmag, 0.0), eta);
        const PhaseDistribution dist = make_phase_distribution(model, 4096);
        double sum = 0.0;
        for (double v : dist.density) sum += v;
        const double integral = sum * 2.0 * kPi / 4096.0; // periodic trapezoid
        worst.update(std::abs(integral - 1.0), 1e-6,
                     "phase lambda=" + fmt(lambda) + " eta=" + fmt(eta) + " |w|=" + fmt(wmag));
      }
    }
  }
  return SuiteResult{"normalization", worst.ratio <= 1.0, worst.ratio, worst.where};
}

} // namespace

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& opts) {
  std::vector<SuiteResult> results;
  results.push_back(hermite_laguerre_suite());
  results.push_back(series_closed_suite());
  results.push_back(fock_moment_suite(opts));
  results.push_back(normalization_suite());
  return results;
}

} // namespace hetphase
