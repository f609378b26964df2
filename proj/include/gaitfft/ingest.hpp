#pragma once

#include "gaitfft/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace gaitfft {

/// Triaxial acceleration time series. Column vectors share one length.
///
/// After parse_recording() the time axis starts at zero and is strictly
/// increasing; after resample_uniform() it is the grid i / sample_rate_hz
/// and `uniform` is set. The z vector always holds the anteroposterior axis.
struct AccelRecording {
  Eigen::VectorXd t;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  double sample_rate_hz = 0.0;
  bool uniform = false;
  Unit unit = Unit::g;
  std::string axis_convention = "z";

  Eigen::Index size() const { return t.size(); }

  /// Time of the last sample (t starts at 0).
  double span_s() const { return t.size() == 0 ? 0.0 : t(t.size() - 1); }

  /// Sample count over rate; the length the window tiling works with.
  double duration_s() const {
    return sample_rate_hz > 0.0 ? static_cast<double>(size()) / sample_rate_hz
                                : span_s();
  }
};

enum class TimeUnit { seconds, milliseconds };

struct IngestOptions {
  std::string time_column = "t";
  std::string x_column = "x";
  std::string y_column = "y";
  /// Column holding the anteroposterior axis.
  std::string z_column = "z";
  TimeUnit time_unit = TimeUnit::seconds;
  Unit unit = Unit::g;
  /// Dropouts longer than this are rejected rather than interpolated.
  double max_gap_s = 1.0;
};

AccelRecording parse_recording(std::istream& csv, const IngestOptions& options = {});

/// Opens and parses a file; ErrorKind::io when it cannot be read.
AccelRecording load_recording(const std::filesystem::path& path,
                              const IngestOptions& options = {});

/// Rates below this cannot resolve the 0.3-4.6 Hz band with margin.
inline constexpr double kMinSampleRateHz = 10.0;

/// Linear interpolation of every axis onto t_i = i / target_hz over
/// [0, t_last]. With no target the rate is round(1 / median dt).
AccelRecording resample_uniform(const AccelRecording& rec,
                                std::optional<double> target_hz = std::nullopt);

}  // namespace gaitfft
