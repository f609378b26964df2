#pragma once

#include "gaitfft/calibration.hpp"
#include "gaitfft/ingest.hpp"
#include "gaitfft/spectral.hpp"

#include <optional>
#include <vector>

namespace gaitfft {

/// A contiguous, non-overlapping slice of the recording's z axis.
struct TimeWindow {
  int index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double duration_s = 0.0;
  double sample_rate_hz = 0.0;
  Unit unit = Unit::g;
  Eigen::VectorXd z;
};

struct WindowMetrics {
  int index = 0;
  double t_start = 0.0;
  double duration_s = 0.0;
  /// Whole active seconds, capped at duration_s for a short final window.
  double active_s = 0.0;
  double step_frequency_hz = 0.0;
  double steps = 0.0;
  double step_length_m = 0.0;
  double distance_m = 0.0;
  double velocity_mps = 0.0;
  bool sf_clamped = false;
  bool sl_floored = false;
};

struct GaitSummary {
  double total_duration_s = 0.0;
  double active_duration_s = 0.0;
  double total_steps = 0.0;
  long long total_steps_rounded = 0;
  double avg_step_frequency_hz = 0.0;
  double avg_step_length_m = 0.0;
  double avg_step_velocity_mps = 0.0;
  double total_distance_m = 0.0;
  /// Type-7 95th percentile of per-window velocity over active windows.
  double p95_step_velocity_mps = 0.0;
  int n_windows = 0;
};

struct PipelineOptions {
  double window_s = 5.0;
  /// A trailing remainder shorter than this is dropped.
  double min_tail_s = 2.0;
  SelectionOptions selection;
};

inline constexpr double kMinRecordingS = 2.0;

std::vector<TimeWindow> split_windows(const AccelRecording& rec, double window_s = 5.0,
                                      double min_tail_s = 2.0);

struct ActiveSeconds {
  /// One entry per 1 s sub-interval; true when active.
  std::vector<bool> mask;
  int count = 0;
};

/// Marks each 1 s sub-interval active when max |z - mean(z)| >= threshold.
/// A trailing fragment counts when it holds at least half a second.
ActiveSeconds classify_active_seconds(const TimeWindow& window, const CalibrationProfile& cal);

struct WindowAnalysis {
  WindowMetrics metrics;
  StepFrequencyDecision decision;
  std::optional<Spectrum<double>> spectrum;
};

WindowAnalysis analyze_window(const TimeWindow& window, const CalibrationProfile& cal,
                              const SubjectProfile& subject,
                              const SelectionOptions& selection = {},
                              bool keep_spectrum = false);

GaitSummary summarize(const std::vector<WindowMetrics>& metrics);

struct AnalysisResult {
  std::vector<WindowAnalysis> windows;
  GaitSummary summary;

  std::vector<WindowMetrics> metrics() const;
};

/// Full per-window procedure plus aggregation on a uniform recording.
AnalysisResult analyze_recording(const AccelRecording& rec, const CalibrationProfile& cal,
                                 const SubjectProfile& subject,
                                 const PipelineOptions& opts = {}, bool keep_spectra = false);

}  // namespace gaitfft
