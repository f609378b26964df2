#pragma once

#include "gaitfft/ingest.hpp"

#include <span>
#include <string>
#include <vector>

namespace gaitfft {

/// Activity threshold from the slow-walk calibration recording.
struct CalibrationProfile {
  double threshold = 0.0;
  double mu_peaks = 0.0;
  /// Population (divide-by-m) standard deviation.
  double sigma_peaks = 0.0;
  int n_steps_m = 0;
  Unit unit = Unit::g;
  /// "sc_l1" when derived from peaks, "explicit" for a configured threshold.
  std::string source = "sc_l1";
};

struct PeakOptions {
  double min_step_separation_s = 0.4;
  /// Required prominence as a fraction of the recording's peak-to-peak range.
  double min_prominence_fraction = 0.25;
};

struct StepPeak {
  double t;
  double value;
};

inline constexpr int kMinCalibrationSteps = 3;

/// One peak per step on the mean-removed z axis, in time order.
/// Throws ErrorKind::calibration when fewer than 3 peaks survive.
std::vector<StepPeak> detect_step_peaks(const AccelRecording& rec, const PeakOptions& opts = {});

/// threshold = mean + population sd of the per-step peaks.
CalibrationProfile compute_threshold(std::span<const double> peaks, Unit unit = Unit::g);

/// detect_step_peaks followed by compute_threshold.
CalibrationProfile calibrate(const AccelRecording& rec, const PeakOptions& opts = {});

/// Profile for a configured threshold; no peak statistics behind it.
CalibrationProfile explicit_threshold(double threshold, Unit unit);

}  // namespace gaitfft
