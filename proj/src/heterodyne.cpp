#include "hetphase/heterodyne.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hetphase/errors.hpp"
#include "hetphase/rng.hpp"
#include "hetphase/special_fn.hpp"
#include "mpfloat.hpp"

namespace hetphase {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Integer power by repeated multiplication; exact for zero bases.
Amplitude pow_int(Amplitude base, int e) {
  Amplitude acc(1.0, 0.0);
  for (int k = 0; k < e; ++k) acc *= base;
  return acc;
}

// c_{n, n+alpha}(z) with alpha >= 0.
Amplitude eigenstate_coeff_upper(int n, int m, Amplitude z) {
  const int alpha = m - n;
  const double x = std::norm(z);
  if (alpha > 0 && x == 0.0) return Amplitude(0.0, 0.0);
  const double lag = laguerre(PolyOrder{n, alpha}, x);
  double log_mag = 0.5 * (log_factorial(n) - log_factorial(m)) - 0.5 * x;
  Amplitude phase(1.0, 0.0);
  if (alpha > 0) {
    log_mag += 0.5 * alpha * std::log(x);
    phase = pow_int(std::conj(z) / std::abs(z), alpha);
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign / kSqrtPi * std::exp(log_mag) * lag * phase;
}

} // namespace

HeterodyneModel::HeterodyneModel(TwinBeamParam p, Amplitude w, double eta)
    : p_(p), w_(w), eta_(eta) {
  require(std::isfinite(w.real()) && std::isfinite(w.imag()),
          "HeterodyneModel: w must be finite");
  require(std::isfinite(eta) && eta > 0.0 && eta <= 1.0,
          "HeterodyneModel: eta must lie in (0, 1]");
}

Amplitude eigenstate_coeff(int n, int m, Amplitude z) {
  require(n >= 0 && m >= 0, "eigenstate_coeff: indices must be nonnegative");
  require(std::isfinite(z.real()) && std::isfinite(z.imag()),
          "eigenstate_coeff: z must be finite");
  if (n <= m) return eigenstate_coeff_upper(n, m, z);
  return std::conj(eigenstate_coeff_upper(m, n, z));
}

double variance(TwinBeamParam p, double eta) {
  require(std::isfinite(eta) && eta > 0.0 && eta <= 1.0, "variance: eta must lie in (0, 1]");
  return (1.0 - p.lambda()) / (1.0 + p.lambda()) + (1.0 - eta) / eta;
}

namespace {

struct SeriesPass {
  double sum = 0.0;     // converged partial sum
  double abs_sum = 0.0; // sum of |term|, for the rounding certificate
  long terms = 0;
};

// Plain double summation of sum_n lambda^n L_n(x) with the geometric-tail
// stopping rule |L_n(x) e^{-x/2}| <= 1.
SeriesPass series_double(double lambda, double x, double tol, long max_terms) {
  SeriesPass out;
  const double envelope = std::exp(0.5 * x) / (1.0 - lambda);
  double l_km1 = 0.0, l_k = 1.0, pow_l = 1.0;
  for (long k = 0;; ++k) {
    const double term = pow_l * l_k;
    out.sum += term;
    out.abs_sum += std::abs(term);
    out.terms = k + 1;
    const double tail = envelope * pow_l * lambda;
    if (tail <= 0.25 * tol * std::abs(out.sum) && k >= 2) break;
    if (k >= max_terms)
      throw ConvergenceError("density_series: series did not reach the tolerance");
    const double l_kp1 =
        (k == 0) ? 1.0 - x : ((2.0 * k + 1.0 - x) * l_k - k * l_km1) / (k + 1.0);
    l_km1 = l_k;
    l_k = l_kp1;
    pow_l *= lambda;
  }
  return out;
}

// One extended-precision pass. Returns true (and the sum in `out`) only if
// the run certifies its own rounding: accumulated error bounded by
// terms * 2^-prec * sum|term| must sit below the tolerance share. The
// certificate uses nothing but quantities computed in the pass itself.
bool series_mpfr_pass(double lambda, double x, double tol, long max_terms, mpfr_prec_t prec,
                      double& out) {
  using detail::MpFloat;
  MpFloat sum(prec), abs_sum(prec), term(prec), tail(prec), bound(prec);
  MpFloat l_km1(prec), l_k(1.0, prec), l_kp1(prec), pow_l(1.0, prec), tmp(prec);
  MpFloat envelope(0.5 * x, prec);
  envelope.exp(envelope);
  envelope.mul_d(envelope, 1.0 / (1.0 - lambda));
  long terms = 0;
  for (long k = 0;; ++k) {
    term.mul(pow_l, l_k);
    sum.add(sum, term);
    tmp.abs(term);
    abs_sum.add(abs_sum, tmp);
    terms = k + 1;
    tail.mul(envelope, pow_l);
    tail.mul_d(tail, lambda);
    bound.abs(sum);
    bound.mul_d(bound, 0.25 * tol);
    if (k >= 2 && !sum.is_zero() && tail.cmpabs(bound) <= 0) break;
    if (k >= max_terms)
      throw ConvergenceError("density_series: series did not reach the tolerance");
    if (k == 0) {
      l_kp1.set(1.0 - x);
    } else {
      l_kp1.set(2.0 * k + 1.0 - x);
      l_kp1.mul(l_kp1, l_k);
      tmp.mul_d(l_km1, static_cast<double>(k));
      l_kp1.sub(l_kp1, tmp);
      l_kp1.div_ui(l_kp1, static_cast<unsigned long>(k + 1));
    }
    l_km1 = l_k;
    l_k = l_kp1;
    pow_l.mul_d(pow_l, lambda);
  }
  const long cancel_bits = abs_sum.exponent() - sum.exponent();
  const long spare = static_cast<long>(prec) - cancel_bits -
                     static_cast<long>(std::ceil(std::log2(static_cast<double>(terms + 4))));
  if (spare < static_cast<long>(std::ceil(std::log2(4.0 / tol))))
    return false;
  out = sum.to_double();
  return true;
}

} // namespace

double density_series(Amplitude z, const HeterodyneModel& model, double tol) {
  require(tol > 0.0, "density_series: tolerance must be positive");
  require(model.eta() == 1.0, "density_series: series form requires unit efficiency");
  const double lambda = model.p().lambda();
  if (lambda >= 1.0 - 1e-9)
    throw ConvergenceError("density_series: lambda too close to 1, use density_closed");
  const double x = std::norm(z - model.w());
  const double prefactor = (1.0 - lambda * lambda) / kPi * std::exp(-x);
  if (lambda == 0.0) return prefactor; // single n = 0 term, L_0 = 1

  const long max_terms = 4'000'000;
  const double eps = std::numeric_limits<double>::epsilon();
  const double envelope = std::exp(0.5 * x) / (1.0 - lambda);
  if (std::isfinite(envelope)) {
    const SeriesPass pass = series_double(lambda, x, tol, max_terms);
    const double rounding = static_cast<double>(pass.terms + 4) * eps * pass.abs_sum;
    if (rounding <= 0.25 * tol * std::abs(pass.sum))
      return prefactor * pass.sum * pass.sum;
  }
  // The double pass could not certify its rounding: the sum cancels by too
  // many digits. Retry in extended precision, escalating until a pass
  // certifies itself.
  long bits = static_cast<long>(
      std::ceil(1.4427 * (0.5 * x + x * lambda / (1.0 - lambda) - std::log(1.0 - lambda) +
                          std::log(4.0 / tol)))) + 96;
  bits = std::max(bits, 128L);
  for (;;) {
    if (bits > 16384L)
      throw ConvergenceError("density_series: cancellation exceeds precision budget");
    double s = 0.0;
    if (series_mpfr_pass(lambda, x, tol, max_terms, static_cast<mpfr_prec_t>(bits), s))
      return prefactor * s * s;
    bits *= 2;
  }
}

double density_closed(Amplitude z, const HeterodyneModel& model) {
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), "density_closed: z must be finite");
  const double d2 = variance(model.p(), model.eta());
  return std::exp(-std::norm(z - model.w()) / d2) / (kPi * d2);
}

SampleBatch sample(const HeterodyneModel& model, std::int64_t count, std::uint64_t seed) {
  require(count >= 1, "sample: count must be positive");
  const double width = std::sqrt(0.5 * variance(model.p(), model.eta()));
  SampleBatch batch;
  batch.seed = seed;
  batch.count = count;
  batch.outcomes.resize(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const NormalPair g = counter_normal_pair(seed, static_cast<std::uint64_t>(i));
    batch.outcomes[static_cast<std::size_t>(i)] =
        model.w() + Amplitude(width * g.g1, width * g.g2);
  }
  return batch;
}

std::vector<KernelRow> kernel_concentration(std::span<const double> lambdas, Amplitude w) {
  require(std::isfinite(w.real()) && std::isfinite(w.imag()),
          "kernel_concentration: w must be finite");
  std::vector<KernelRow> rows;
  rows.reserve(lambdas.size());
  for (double lam : lambdas) {
    const TwinBeamParam p(lam); // validates the range
    rows.push_back(KernelRow{lam, variance(p, 1.0)});
  }
  return rows;
}

} // namespace hetphase
