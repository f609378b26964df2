#pragma once

#include "gaitfft/ingest.hpp"

#include <cstdint>
#include <vector>

namespace gaitfft {

struct GaitSegment {
  double duration_s = 0.0;
  /// Steps per second; 0 marks rest.
  double cadence_hz = 0.0;
  double amplitude = 1.0;
  /// Second-harmonic amplitude relative to the fundamental, in [0, 1).
  double harmonic2_ratio = 0.0;
};

/// Piecewise-stationary ambulation with seeded uniform noise.
///
/// z(t) = A (sin(phi(t)) + r sin(2 phi(t))) + U(-noise, noise), where phi
/// advances at 2 pi cadence and is continuous across segments. x and y carry
/// noise of amplitude kLateralNoise only. Noise comes from std::mt19937_64
/// seeded with `seed`; each 64-bit draw maps to (draw >> 11) * 2^-53 in
/// [0, 1), drawn per sample in the order z, x, y.
struct GaitScenario {
  std::vector<GaitSegment> segments;
  double sample_rate_hz = 100.0;
  double noise_amplitude = 0.0;
  std::uint64_t seed = 0;
  Unit unit = Unit::g;

  double duration_s() const;

  /// Throws ErrorKind::scenario on an invalid description.
  void validate() const;
};

inline constexpr double kLateralNoise = 0.01;

struct GroundTruth {
  double total_steps = 0.0;
  std::vector<double> segment_steps;
  double active_duration_s = 0.0;
  double total_duration_s = 0.0;
  /// Cadence of the walking segment overlapping each window most, 0 if none.
  std::vector<double> window_frequency_hz;
  /// Crest times of the fundamental (phase = pi/2 mod 2 pi) while walking.
  std::vector<double> step_times;
};

struct SyntheticRecording {
  AccelRecording recording;
  GroundTruth truth;
};

SyntheticRecording generate(const GaitScenario& scenario, double window_s = 5.0);

}  // namespace gaitfft
