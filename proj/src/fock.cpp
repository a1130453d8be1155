#include "hetphase/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hetphase/errors.hpp"
#include "hetphase/special_fn.hpp"

namespace hetphase {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double captured_norm(const std::vector<Amplitude>& coeffs) {
  long double sum = 0.0L;
  for (const Amplitude& c : coeffs) sum += static_cast<long double>(std::norm(c));
  return static_cast<double>(sum);
}

// Fock-basis matrix of the displacement operator, (cutoff+1)^2 row-major:
// entry (m, n) = <m|D(z)|n>. Filled diagonal by diagonal so each
// generalized Laguerre sequence comes from one upward recurrence, with the
// factorial ratio kept in log space.
std::vector<Amplitude> displacement_matrix(Amplitude z, int cutoff) {
  const int dim = cutoff + 1;
  std::vector<Amplitude> d(static_cast<std::size_t>(dim) * dim, Amplitude(0.0, 0.0));
  const double x = std::norm(z);
  if (x == 0.0) {
    for (int n = 0; n < dim; ++n) d[static_cast<std::size_t>(n) * dim + n] = 1.0;
    return d;
  }
  std::vector<double> lf(dim);
  for (int n = 0; n < dim; ++n) lf[n] = log_factorial(n);
  const double log_r = 0.5 * std::log(x);
  const Amplitude phase = z / std::abs(z);
  Amplitude up_phase(1.0, 0.0);   // phase^alpha, for row >= col
  Amplitude down_phase(1.0, 0.0); // (-conj(phase))^alpha, for row <= col
  for (int alpha = 0; alpha < dim; ++alpha) {
    double l_km1 = 0.0; // L_{k-1}^alpha(x)
    double l_k = 1.0;   // L_k^alpha(x)
    for (int k = 0; k + alpha < dim; ++k) {
      const double mag =
          std::exp(0.5 * (lf[k] - lf[k + alpha]) + alpha * log_r - 0.5 * x) * l_k;
      d[static_cast<std::size_t>(k + alpha) * dim + k] = mag * up_phase;
      d[static_cast<std::size_t>(k) * dim + (k + alpha)] = mag * down_phase;
      const double l_kp1 =
          (k == 0) ? 1.0 + alpha - x
                   : ((2.0 * k + 1.0 + alpha - x) * l_k - (k + alpha) * l_km1) / (k + 1.0);
      l_km1 = l_k;
      l_k = l_kp1;
    }
    up_phase *= phase;
    down_phase *= -std::conj(phase);
  }
  return d;
}

} // namespace

TwinBeamParam::TwinBeamParam(double lambda) : lambda_(lambda) {
  require(std::isfinite(lambda) && lambda >= 0.0 && lambda < 1.0,
          "TwinBeamParam: lambda must lie in [0, 1)");
}

TwoModeFockState::TwoModeFockState(int cutoff, std::vector<Amplitude> coeffs, double norm_defect)
    : cutoff_(cutoff), coeffs_(std::move(coeffs)), norm_defect_(norm_defect) {
  require(cutoff >= 0, "TwoModeFockState: cutoff must be nonnegative");
  const std::size_t dim = static_cast<std::size_t>(cutoff) + 1;
  require(coeffs_.size() == dim * dim, "TwoModeFockState: coefficient matrix size mismatch");
  const double captured = captured_norm(coeffs_);
  require(captured <= 1.0 + 1e-12, "TwoModeFockState: norm exceeds unity");
  require(std::abs((1.0 - captured) - norm_defect_) <= 1e-12,
          "TwoModeFockState: norm defect inconsistent with coefficients");
}

TwoModeFockState twin_beams(TwinBeamParam p, int cutoff) {
  require(cutoff >= 0, "twin_beams: cutoff must be nonnegative");
  const int dim = cutoff + 1;
  std::vector<Amplitude> c(static_cast<std::size_t>(dim) * dim, Amplitude(0.0, 0.0));
  const double head = std::sqrt(1.0 - p.lambda() * p.lambda());
  double term = head;
  for (int n = 0; n < dim; ++n) {
    c[static_cast<std::size_t>(n) * dim + n] = term;
    term *= -p.lambda();
  }
  const double tail = std::pow(p.lambda(), 2.0 * (cutoff + 1)); // exact geometric remainder
  return TwoModeFockState(cutoff, std::move(c), tail);
}

TwoModeFockState displace_signal(const TwoModeFockState& state, Amplitude z,
                                 double max_norm_defect) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()),
          "displace_signal: displacement must be finite");
  if (z == Amplitude(0.0, 0.0)) return state;
  const int dim = state.cutoff() + 1;
  const std::vector<Amplitude> d = displacement_matrix(z, state.cutoff());
  std::vector<Amplitude> out(static_cast<std::size_t>(dim) * dim, Amplitude(0.0, 0.0));
  for (int m = 0; m < dim; ++m) {
    Amplitude* row = out.data() + static_cast<std::size_t>(m) * dim;
    for (int k = 0; k < dim; ++k) {
      const Amplitude dk = d[static_cast<std::size_t>(m) * dim + k];
      if (dk == Amplitude(0.0, 0.0)) continue;
      const Amplitude* src = state.coeffs().data() + static_cast<std::size_t>(k) * dim;
      for (int j = 0; j < dim; ++j) row[j] += dk * src[j];
    }
  }
  const double defect = std::max(0.0, 1.0 - captured_norm(out));
  if (defect > max_norm_defect) {
    std::ostringstream msg;
    msg << "displace_signal: norm defect " << defect << " exceeds tolerance " << max_norm_defect
        << " at cutoff " << state.cutoff() << "; raise the cutoff";
    throw TruncationError(msg.str());
  }
  return TwoModeFockState(state.cutoff(), std::move(out), defect);
}

double mean_photons(const TwoModeFockState& state) {
  const int dim = state.cutoff() + 1;
  long double sum = 0.0L;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m)
      sum += static_cast<long double>(n + m) * std::norm(state.coeff(n, m));
  return static_cast<double>(sum);
}

double mean_photons_analytic(TwinBeamParam p, Amplitude z) {
  const double lam2 = p.lambda() * p.lambda();
  return std::norm(z) + 2.0 * lam2 / (1.0 - lam2);
}

ZMoments z_moments(const TwoModeFockState& state, double max_norm_defect) {
  if (state.norm_defect() > max_norm_defect) {
    std::ostringstream msg;
    msg << "z_moments: norm defect " << state.norm_defect() << " exceeds tolerance "
        << max_norm_defect << "; moments would be biased";
    throw TruncationError(msg.str());
  }
  const int dim = state.cutoff() + 1;
  // <a> and <b+> by index shifts.
  std::complex<long double> mean_acc(0.0L, 0.0L);
  for (int n = 1; n < dim; ++n)
    for (int m = 0; m < dim; ++m)
      mean_acc += static_cast<std::complex<long double>>(
          std::conj(state.coeff(n - 1, m)) * std::sqrt(static_cast<double>(n)) *
          state.coeff(n, m));
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m + 1 < dim; ++m)
      mean_acc += static_cast<std::complex<long double>>(
          std::conj(state.coeff(n, m + 1)) * std::sqrt(m + 1.0) * state.coeff(n, m));
  const Amplitude mean(static_cast<double>(mean_acc.real()), static_cast<double>(mean_acc.imag()));

  // ||(Z - <Z>)|psi>||^2, keeping the b+ overflow into m = cutoff+1 so the
  // image-band raise is not silently clipped.
  long double second = 0.0L;
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m <= dim; ++m) {
      Amplitude chi(0.0, 0.0);
      if (n + 1 < dim && m < dim) chi += std::sqrt(n + 1.0) * state.coeff(n + 1, m);
      if (m >= 1) chi += std::sqrt(static_cast<double>(m)) * state.coeff(n, m - 1);
      if (m < dim) chi -= mean * state.coeff(n, m);
      second += static_cast<long double>(std::norm(chi));
    }
  }
  return ZMoments{mean, static_cast<double>(second)};
}

Amplitude overlap(const TwoModeFockState& s1, const TwoModeFockState& s2) {
  require(s1.cutoff() == s2.cutoff(), "overlap: cutoff mismatch");
  std::complex<long double> acc(0.0L, 0.0L);
  const std::size_t size = s1.coeffs().size();
  for (std::size_t i = 0; i < size; ++i)
    acc += static_cast<std::complex<long double>>(std::conj(s1.coeffs()[i]) * s2.coeffs()[i]);
  return Amplitude(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}

Amplitude bs_displacement(const BeamSplitterSetting& setting) {
  require(std::isfinite(setting.beta.real()) && std::isfinite(setting.beta.imag()),
          "bs_displacement: beta must be finite");
  require(setting.tau > 0.0 && setting.tau < 1.0, "bs_displacement: tau must lie in (0, 1)");
  return setting.beta * std::sqrt(1.0 - setting.tau);
}

LoValidation validate_classical_lo(const BeamSplitterSetting& setting, TwinBeamParam p,
                                   double margin) {
  require(margin > 0.0, "validate_classical_lo: margin must be positive");
  const double ratio = std::norm(setting.beta) * (1.0 - p.lambda());
  return LoValidation{ratio >= margin, ratio};
}

int cutoff_for(TwinBeamParam p, Amplitude z, double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "cutoff_for: epsilon must lie in (0, 1)");
  const double r = std::abs(z);
  const int margin_floor = static_cast<int>(std::ceil(r * r + 6.0 * r + 10.0));
  int tail_floor = 0;
  if (p.lambda() > 0.0) {
    const double needed = std::log(epsilon) / (2.0 * std::log(p.lambda()));
    tail_floor = std::max(0, static_cast<int>(std::ceil(needed)) - 1);
  }
  const int floor_n = std::max(margin_floor, tail_floor);

  const auto defect_at = [&](int n) {
    const TwoModeFockState displaced =
        displace_signal(twin_beams(p, n), z, std::numeric_limits<double>::infinity());
    return displaced.norm_defect();
  };

  int good = floor_n;
  if (defect_at(good) <= epsilon) return good;
  int bad = good;
  for (int step = 0; step < 64; ++step) {
    good = bad + std::max(4, bad / 8);
    if (defect_at(good) <= epsilon) break;
    bad = good;
    if (step == 63)
      throw ConvergenceError("cutoff_for: no cutoff satisfies the norm-defect target");
  }
  while (good - bad > 1) {
    const int mid = bad + (good - bad) / 2;
    if (defect_at(mid) <= epsilon)
      good = mid;
    else
      bad = mid;
  }
  return good;
}

} // namespace hetphase
