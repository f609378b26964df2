#include "gaitfft/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gaitfft {
namespace {

// Topographic prominence: height above the higher of the two lowest points
// reachable on each side before meeting a taller sample.
double prominence(const Eigen::VectorXd& z, Eigen::Index peak) {
  const double height = z(peak);
  double left_min = height;
  for (Eigen::Index i = peak - 1; i >= 0 && z(i) <= height; --i) {
    left_min = std::min(left_min, z(i));
  }
  double right_min = height;
  for (Eigen::Index i = peak + 1; i < z.size() && z(i) <= height; ++i) {
    right_min = std::min(right_min, z(i));
  }
  return height - std::max(left_min, right_min);
}

}  // namespace

std::vector<StepPeak> detect_step_peaks(const AccelRecording& rec, const PeakOptions& opts) {
  if (!rec.uniform || rec.sample_rate_hz <= 0.0) {
    throw Error(ErrorKind::validation, "peak detection requires a uniformly resampled recording");
  }
  const Eigen::VectorXd z = rec.z.array() - rec.z.mean();
  const Eigen::Index n = z.size();
  const double min_prominence =
      opts.min_prominence_fraction * (z.maxCoeff() - z.minCoeff());

  // Local maxima; a plateau counts once at its first sample.
  std::vector<Eigen::Index> candidates;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    if (!(z(i) > z(i - 1))) continue;
    Eigen::Index j = i;
    while (j + 1 < n && z(j + 1) == z(i)) ++j;
    if (j + 1 < n && z(j + 1) < z(i) && prominence(z, i) >= min_prominence &&
        min_prominence > 0.0) {
      candidates.push_back(i);
    }
    i = j;
  }

  // Enforce the minimum separation, keeping taller peaks first.
  const auto min_gap = static_cast<Eigen::Index>(
      std::ceil(opts.min_step_separation_s * rec.sample_rate_hz - 1e-9));
  std::vector<Eigen::Index> by_height = candidates;
  std::stable_sort(by_height.begin(), by_height.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return z(a) > z(b); });
  std::vector<Eigen::Index> kept;
  for (const auto idx : by_height) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](Eigen::Index k) {
      return std::abs(k - idx) < min_gap;
    });
    if (clear) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());

  if (static_cast<int>(kept.size()) < kMinCalibrationSteps) {
    throw Error(ErrorKind::calibration,
                "unusable calibration recording: found " + std::to_string(kept.size()) +
                    " step peaks, need at least 3");
  }
  std::vector<StepPeak> peaks;
  peaks.reserve(kept.size());
  for (const auto idx : kept) peaks.push_back({rec.t(idx), z(idx)});
  return peaks;
}

CalibrationProfile compute_threshold(std::span<const double> peaks, Unit unit) {
  if (static_cast<int>(peaks.size()) < kMinCalibrationSteps) {
    throw Error(ErrorKind::calibration, "threshold needs at least 3 step peaks");
  }
  if (!std::all_of(peaks.begin(), peaks.end(), [](double p) { return std::isfinite(p); })) {
    throw Error(ErrorKind::calibration, "threshold: non-finite peak value");
  }
  const Eigen::Map<const Eigen::VectorXd> v(peaks.data(), static_cast<Eigen::Index>(peaks.size()));
  const double mu = v.mean();
  const double sigma = std::sqrt((v.array() - mu).square().mean());

  CalibrationProfile profile;
  profile.mu_peaks = mu;
  profile.sigma_peaks = sigma;
  profile.threshold = mu + sigma;
  profile.n_steps_m = static_cast<int>(peaks.size());
  profile.unit = unit;
  profile.source = "sc_l1";
  return profile;
}

CalibrationProfile calibrate(const AccelRecording& rec, const PeakOptions& opts) {
  const auto peaks = detect_step_peaks(rec, opts);
  std::vector<double> values(peaks.size());
  std::transform(peaks.begin(), peaks.end(), values.begin(),
                 [](const StepPeak& p) { return p.value; });
  return compute_threshold(values, rec.unit);
}

CalibrationProfile explicit_threshold(double threshold, Unit unit) {
  if (!std::isfinite(threshold) || threshold < 0.0) {
    throw Error(ErrorKind::validation, "explicit threshold must be finite and non-negative");
  }
  CalibrationProfile profile;
  profile.threshold = threshold;
  profile.mu_peaks = threshold;
  profile.unit = unit;
  profile.source = "explicit";
  return profile;
}

}  // namespace gaitfft
