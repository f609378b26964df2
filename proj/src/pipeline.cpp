#include "gaitfft/pipeline.hpp"

#include "gaitfft/quantile.hpp"
#include "gaitfft/step_length.hpp"

#include <algorithm>
#include <cmath>

namespace gaitfft {

std::vector<TimeWindow> split_windows(const AccelRecording& rec, double window_s,
                                      double min_tail_s) {
  if (!rec.uniform || rec.sample_rate_hz <= 0.0) {
    throw Error(ErrorKind::validation, "windowing requires a uniformly resampled recording");
  }
  if (!(window_s > 0.0)) {
    throw Error(ErrorKind::validation, "window length must be positive");
  }
  const double rate = rec.sample_rate_hz;
  if (rec.duration_s() < kMinRecordingS) {
    throw Error(ErrorKind::validation, "recording too short: " +
                                           std::to_string(rec.duration_s()) +
                                           " s, need at least 2 s");
  }

  const auto per_window = std::max<Eigen::Index>(1, std::llround(window_s * rate));
  const Eigen::Index n = rec.size();
  std::vector<TimeWindow> windows;

  auto emit = [&](Eigen::Index first, Eigen::Index count) {
    TimeWindow w;
    w.index = static_cast<int>(windows.size());
    w.t_start = static_cast<double>(first) / rate;
    w.duration_s = static_cast<double>(count) / rate;
    w.t_end = w.t_start + w.duration_s;
    w.sample_rate_hz = rate;
    w.unit = rec.unit;
    w.z = rec.z.segment(first, count);
    windows.push_back(std::move(w));
  };

  Eigen::Index first = 0;
  for (; first + per_window <= n; first += per_window) emit(first, per_window);
  const Eigen::Index tail = n - first;
  if (tail > 0 && static_cast<double>(tail) / rate >= min_tail_s - 1e-9) emit(first, tail);

  if (windows.empty()) {
    throw Error(ErrorKind::validation, "recording too short for a single window");
  }
  return windows;
}

ActiveSeconds classify_active_seconds(const TimeWindow& window, const CalibrationProfile& cal) {
  if (window.unit != cal.unit) {
    throw Error(ErrorKind::validation,
                "unit mismatch: recording is " + std::string(to_string(window.unit)) +
                    " but calibration is " + std::string(to_string(cal.unit)));
  }
  const auto per_second = std::max<Eigen::Index>(1, std::llround(window.sample_rate_hz));
  const Eigen::Index n = window.z.size();
  const Eigen::ArrayXd centered = (window.z.array() - window.z.mean()).abs();

  ActiveSeconds out;
  for (Eigen::Index first = 0; first < n; first += per_second) {
    const Eigen::Index count = std::min(per_second, n - first);
    if (2 * count < per_second) break;
    const bool active = centered.segment(first, count).maxCoeff() >= cal.threshold;
    out.mask.push_back(active);
    out.count += active ? 1 : 0;
  }
  return out;
}

WindowAnalysis analyze_window(const TimeWindow& window, const CalibrationProfile& cal,
                              const SubjectProfile& subject, const SelectionOptions& selection,
                              bool keep_spectrum) {
  WindowAnalysis out;
  auto& m = out.metrics;
  m.index = window.index;
  m.t_start = window.t_start;
  m.duration_s = window.duration_s;

  const auto active = classify_active_seconds(window, cal);
  auto spectrum = fft_magnitude<double>(window.z, window.sample_rate_hz);
  out.decision = select_step_frequency(spectrum, selection);
  if (keep_spectrum) out.spectrum = std::move(spectrum);

  const double active_s = std::min(static_cast<double>(active.count), window.duration_s);
  m.active_s = active_s;
  if (out.decision.frequency_hz <= 0.0 || active_s <= 0.0) return out;

  const auto sl = predict_step_length(out.decision.frequency_hz, subject);
  m.step_frequency_hz = out.decision.frequency_hz;
  m.steps = m.step_frequency_hz * active_s;
  m.step_length_m = sl.length_m;
  m.distance_m = m.steps * m.step_length_m;
  m.velocity_mps = m.distance_m / active_s;
  m.sf_clamped = sl.clamped;
  m.sl_floored = sl.floored;
  return out;
}

GaitSummary summarize(const std::vector<WindowMetrics>& metrics) {
  if (metrics.empty()) {
    throw Error(ErrorKind::validation, "cannot summarize an empty window list");
  }
  GaitSummary s;
  std::vector<double> active_velocities;
  for (const auto& m : metrics) {
    s.total_duration_s += m.duration_s;
    s.active_duration_s += m.active_s;
    s.total_steps += m.steps;
    s.total_distance_m += m.distance_m;
    if (m.active_s > 0.0) active_velocities.push_back(m.velocity_mps);
  }
  s.n_windows = static_cast<int>(metrics.size());
  s.total_steps_rounded = static_cast<long long>(std::floor(s.total_steps + 0.5));
  s.avg_step_frequency_hz = s.total_steps / s.total_duration_s;
  s.avg_step_length_m = s.total_steps > 0.0 ? s.total_distance_m / s.total_steps : 0.0;
  s.avg_step_velocity_mps = s.total_distance_m / s.total_duration_s;
  if (!active_velocities.empty()) {
    s.p95_step_velocity_mps = quantile_type7(std::move(active_velocities), 0.95);
  }
  return s;
}

std::vector<WindowMetrics> AnalysisResult::metrics() const {
  std::vector<WindowMetrics> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back(w.metrics);
  return out;
}

AnalysisResult analyze_recording(const AccelRecording& rec, const CalibrationProfile& cal,
                                 const SubjectProfile& subject, const PipelineOptions& opts,
                                 bool keep_spectra) {
  if (rec.unit != cal.unit) {
    throw Error(ErrorKind::validation,
                "unit mismatch: recording is " + std::string(to_string(rec.unit)) +
                    " but calibration is " + std::string(to_string(cal.unit)));
  }
  AnalysisResult result;
  for (const auto& window : split_windows(rec, opts.window_s, opts.min_tail_s)) {
    result.windows.push_back(
        analyze_window(window, cal, subject, opts.selection, keep_spectra));
  }
  result.summary = summarize(result.metrics());
  return result;
}

}  // namespace gaitfft
