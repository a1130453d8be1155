#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hetphase/fock.hpp"

namespace hetphase {

/// Parameter bundle of one heterodyne experiment: twin-beam parameter,
/// prepared signal displacement w, and detector quantum efficiency.
class HeterodyneModel {
public:
  HeterodyneModel(TwinBeamParam p, Amplitude w, double eta = 1.0);
  TwinBeamParam p() const { return p_; }
  Amplitude w() const { return w_; }
  double eta() const { return eta_; }

private:
  TwinBeamParam p_;
  Amplitude w_;
  double eta_;
};

/// Batch of heterodyne photocurrent samples; regenerating with the same
/// (seed, count, model) reproduces outcomes bit-for-bit.
struct SampleBatch {
  std::uint64_t seed = 0;
  std::int64_t count = 0;
  std::vector<Amplitude> outcomes;
};

/// Number-representation coefficient c_{n,m}(z) of the photocurrent
/// eigenstate: for m = n + alpha,
///   (-1)^n/sqrt(pi) sqrt(n!/m!) conj(z)^alpha L_n^alpha(|z|^2) e^{-|z|^2/2},
/// and the conjugate-transposed value for n > m.
Amplitude eigenstate_coeff(int n, int m, Amplitude z);

/// Heterodyne outcome variance (1-lambda)/(1+lambda) + (1-eta)/eta.
double variance(TwinBeamParam p, double eta);

/// Outcome probability density at z via the truncated series
/// (1-lambda^2)/pi e^{-|z-w|^2} |sum_n lambda^n L_n(|z-w|^2)|^2, summed
/// until the geometric tail envelope guarantees the requested relative
/// error. Requires eta = 1 (the series form is only derived there). The
/// sum is repeated in extended precision whenever the double-precision
/// pass cannot certify the tolerance (the terms cancel by up to dozens of
/// digits at large |z-w| and lambda near 1).
double density_series(Amplitude z, const HeterodyneModel& model, double tol);

/// Outcome probability density in closed form, a complex Gaussian of
/// variance `variance(p, eta)` centered at w.
double density_closed(Amplitude z, const HeterodyneModel& model);

/// Draw `count` outcomes z = w + Delta (g1 + i g2)/sqrt(2) from the
/// counter-based generator; deterministic in (seed, count, model).
SampleBatch sample(const HeterodyneModel& model, std::int64_t count, std::uint64_t seed);

/// One row of the kernel-concentration table: outcome variance at a given
/// twin-beam parameter (eta = 1).
struct KernelRow {
  double lambda = 0.0;
  double variance = 0.0;
};

/// Variance sequence showing the outcome kernel contracting toward a 2-D
/// delta as lambda -> 1.
std::vector<KernelRow> kernel_concentration(std::span<const double> lambdas, Amplitude w);

} // namespace hetphase
