#pragma once

#include "gaitfft/types.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace gaitfft {

/// One-sided magnitude spectrum on a uniform frequency grid starting at 0 Hz.
template <typename Scalar>
struct Spectrum {
  VectorX<Scalar> freqs;
  VectorX<Scalar> mags;
  Scalar resolution_hz = Scalar(0);

  Eigen::Index size() const { return freqs.size(); }

  /// Builds the frequency axis for the given magnitudes.
  static Spectrum from_magnitudes(VectorX<Scalar> mags, Scalar resolution_hz) {
    Spectrum s;
    s.freqs = VectorX<Scalar>::LinSpaced(mags.size(), Scalar(0),
                                         resolution_hz * Scalar(mags.size() - 1));
    s.mags = std::move(mags);
    s.resolution_hz = resolution_hz;
    return s;
  }
};

inline constexpr Eigen::Index kMinSpectralLength = 16;
inline constexpr int kPadFactor = 8;

/// Smallest power of two that is at least kPadFactor * n.
inline Eigen::Index padded_length(Eigen::Index n) {
  Eigen::Index p = 1;
  while (p < kPadFactor * n) p <<= 1;
  return p;
}

/// Hann-tapered, zero-padded magnitude spectrum of the mean-removed signal.
///
/// Magnitudes are scaled by 2 / sum(window), so a pure tone of amplitude A
/// that falls on a bin reads as A.
template <typename Scalar>
Spectrum<Scalar> fft_magnitude(const Eigen::Ref<const VectorX<Scalar>>& signal,
                               Scalar sample_rate_hz) {
  const Eigen::Index n = signal.size();
  if (n < kMinSpectralLength) {
    throw Error(ErrorKind::validation, "spectrum: signal needs at least 16 samples");
  }
  if (!(sample_rate_hz > Scalar(9.2))) {
    throw Error(ErrorKind::validation, "spectrum: sample rate must exceed 9.2 Hz");
  }
  if (!signal.allFinite()) {
    throw Error(ErrorKind::validation, "spectrum: non-finite sample");
  }

  const Eigen::Index padded = padded_length(n);
  const Scalar mean = signal.mean();
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;

  std::vector<Scalar> buffer(static_cast<std::size_t>(padded), Scalar(0));
  Scalar window_sum(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar w =
        Scalar(0.5) - Scalar(0.5) * std::cos(two_pi * Scalar(i) / Scalar(n - 1));
    window_sum += w;
    buffer[static_cast<std::size_t>(i)] = w * (signal(i) - mean);
  }

  Eigen::FFT<Scalar> fft;
  fft.SetFlag(Eigen::FFT<Scalar>::HalfSpectrum);
  std::vector<std::complex<Scalar>> bins;
  fft.fwd(bins, buffer);

  const Scalar scale = Scalar(2) / window_sum;
  VectorX<Scalar> mags(padded / 2 + 1);
  for (Eigen::Index k = 0; k < mags.size(); ++k) {
    mags(k) = std::abs(bins[static_cast<std::size_t>(k)]) * scale;
  }
  return Spectrum<Scalar>::from_magnitudes(std::move(mags),
                                           sample_rate_hz / Scalar(padded));
}

enum class SelectionRule { none_in_band, dominant_peak, subharmonic_peak };

struct SpectralPeak {
  Eigen::Index bin = 0;
  double freq_hz = 0.0;
  double magnitude = 0.0;
};

struct StepFrequencyDecision {
  /// Selected step frequency after interpolation, 0 when nothing is in band.
  double frequency_hz = 0.0;
  SelectionRule rule = SelectionRule::none_in_band;
  std::optional<SpectralPeak> dominant;
  std::optional<SpectralPeak> candidate;
};

struct SelectionOptions {
  double band_lo_hz = 0.3;
  double band_hi_hz = 4.6;
  /// Frequency and magnitude ratio for preferring a lower peak.
  double ratio = 0.6;
  /// Local maxima below this fraction of the dominant magnitude are ignored.
  /// The in-band dominant itself must reach this fraction of the strongest
  /// peak anywhere in the spectrum.
  double noise_floor = 0.05;
};

/// Vertex offset in bins of the parabola through three equally spaced points.
template <typename Scalar>
Scalar parabolic_offset(Scalar left, Scalar center, Scalar right) {
  const Scalar denom = left - Scalar(2) * center + right;
  if (denom == Scalar(0)) return Scalar(0);
  return std::clamp(Scalar(0.5) * (left - right) / denom, Scalar(-0.5), Scalar(0.5));
}

/// Picks the step frequency from a magnitude spectrum.
///
/// The dominant peak is the largest local maximum inside the band. A lower
/// in-band peak replaces it when its frequency is below ratio * dominant
/// frequency and its magnitude is at least ratio * dominant magnitude; among
/// several such peaks the largest wins.
template <typename Scalar>
StepFrequencyDecision select_step_frequency(const Spectrum<Scalar>& spec,
                                            const SelectionOptions& opts = {}) {
  StepFrequencyDecision decision;
  const Eigen::Index n = spec.size();

  std::vector<SpectralPeak> peaks;
  double strongest = 0.0;
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    if (!(spec.mags(k) > spec.mags(k - 1) && spec.mags(k) > spec.mags(k + 1))) continue;
    const double m = static_cast<double>(spec.mags(k));
    strongest = std::max(strongest, m);
    const double f = static_cast<double>(spec.freqs(k));
    if (f >= opts.band_lo_hz && f <= opts.band_hi_hz) peaks.push_back({k, f, m});
  }
  if (peaks.empty()) return decision;

  const auto dominant = *std::max_element(
      peaks.begin(), peaks.end(),
      [](const SpectralPeak& a, const SpectralPeak& b) { return a.magnitude < b.magnitude; });
  if (!(dominant.magnitude > 0.0)) return decision;
  // Taper sidelobes of an out-of-band component are not step peaks.
  if (dominant.magnitude < opts.noise_floor * strongest) return decision;
  decision.dominant = dominant;

  std::optional<SpectralPeak> best;
  for (const auto& p : peaks) {
    if (p.magnitude < opts.noise_floor * dominant.magnitude) continue;
    if (p.freq_hz < opts.ratio * dominant.freq_hz &&
        p.magnitude >= opts.ratio * dominant.magnitude) {
      if (!best || p.magnitude > best->magnitude) best = p;
    }
  }

  SpectralPeak selected = dominant;
  decision.rule = SelectionRule::dominant_peak;
  if (best) {
    decision.candidate = best;
    decision.rule = SelectionRule::subharmonic_peak;
    selected = *best;
  }

  const Eigen::Index k = selected.bin;
  const Scalar offset = parabolic_offset(spec.mags(k - 1), spec.mags(k), spec.mags(k + 1));
  decision.frequency_hz =
      static_cast<double>(spec.freqs(k) + offset * spec.resolution_hz);
  return decision;
}

const char* to_string(SelectionRule rule);

}  // namespace gaitfft
