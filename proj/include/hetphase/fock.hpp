#pragma once

#include <complex>
#include <vector>

namespace hetphase {

/// Dimensionless complex field amplitude (houses z, w and the local
/// oscillator amplitude beta).
using Amplitude = std::complex<double>;

/// Twin-beam squeeze parameter lambda in [0, 1); the amplifier gain
/// (1 - lambda^2)^{-1} is derived from it so the pair stays consistent.
class TwinBeamParam {
public:
  explicit TwinBeamParam(double lambda);
  double lambda() const { return lambda_; }
  double gain() const { return 1.0 / (1.0 - lambda_ * lambda_); }

private:
  double lambda_;
};

/// Two-mode state truncated to photon numbers 0..cutoff in each mode.
/// coeff(n, m) is the amplitude on |n> (signal) x |m> (image band);
/// norm_defect is the probability weight lost to truncation.
class TwoModeFockState {
public:
  TwoModeFockState(int cutoff, std::vector<Amplitude> coeffs, double norm_defect);

  int cutoff() const { return cutoff_; }
  double norm_defect() const { return norm_defect_; }
  Amplitude coeff(int n, int m) const { return coeffs_[index(n, m)]; }
  const std::vector<Amplitude>& coeffs() const { return coeffs_; }

  std::size_t index(int n, int m) const {
    return static_cast<std::size_t>(n) * (cutoff_ + 1) + static_cast<std::size_t>(m);
  }

private:
  int cutoff_;
  std::vector<Amplitude> coeffs_; // row-major, (cutoff+1)^2
  double norm_defect_;
};

/// High-transmissivity beam splitter fed by a strong coherent local
/// oscillator; realizes a displacement in the tau -> 1 limit.
struct BeamSplitterSetting {
  Amplitude beta;   ///< local-oscillator amplitude
  double tau = 0.5; ///< transmissivity, in (0, 1)
};

/// Twin beams at finite gain: diagonal amplitudes
/// sqrt(1-lambda^2) (-lambda)^n, with the exact geometric tail recorded as
/// the norm defect.
TwoModeFockState twin_beams(TwinBeamParam p, int cutoff);

/// Apply the signal-mode displacement e^{z a+ - z* a} at fixed cutoff.
/// Throws TruncationError if the truncation leakage pushes the norm defect
/// above max_norm_defect.
TwoModeFockState displace_signal(const TwoModeFockState& state, Amplitude z,
                                 double max_norm_defect = 1e-6);

/// Truncated <a+a + b+b> read directly off the coefficient matrix.
double mean_photons(const TwoModeFockState& state);

/// Closed form |z|^2 + 2 lambda^2/(1-lambda^2) for displaced twin beams.
double mean_photons_analytic(TwinBeamParam p, Amplitude z);

/// First and second central moments of the heterodyne photocurrent
/// Z = a + b+ evaluated on the coefficient matrix.
struct ZMoments {
  Amplitude mean;
  double second_central = 0.0;
};

/// Compute Z moments by ladder-operator index shifts. Throws
/// TruncationError when the state's norm defect exceeds max_norm_defect
/// (the moments would be biased).
ZMoments z_moments(const TwoModeFockState& state, double max_norm_defect = 1e-6);

/// Entrywise inner product <s1|s2>; cutoffs must match.
Amplitude overlap(const TwoModeFockState& s1, const TwoModeFockState& s2);

/// Displacement realized by the beam splitter in the strong-oscillator
/// limit: |z| = |beta| sqrt(1-tau) with the phase of beta.
Amplitude bs_displacement(const BeamSplitterSetting& setting);

/// Whether the local oscillator is strong enough to be treated classically:
/// |beta|^2 must exceed the twin-beam photon scale (1-lambda)^{-1} by the
/// given margin. ratio reports |beta|^2 (1-lambda).
struct LoValidation {
  bool ok = false;
  double ratio = 0.0;
};
LoValidation validate_classical_lo(const BeamSplitterSetting& setting, TwinBeamParam p,
                                   double margin = 100.0);

/// Smallest cutoff for which displaced twin beams keep norm_defect <=
/// epsilon: geometric-tail and displacement-margin floors, then verified
/// (and grown if needed) against the actually constructed state.
int cutoff_for(TwinBeamParam p, Amplitude z, double epsilon);

} // namespace hetphase
