#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaitfft {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Acceleration unit carried on every recording and calibration profile.
/// Thresholds are only comparable between signals with the same tag.
enum class Unit { g, ms2 };

std::string_view to_string(Unit unit);
Unit parse_unit(std::string_view text);

/// Broad failure class. The CLI maps each kind onto a stable exit code.
enum class ErrorKind {
  io,
  parse,
  validation,
  calibration,
  length_mismatch,
  scenario,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Standing height and diagnosis indicator for the step-length model.
struct SubjectProfile {
  double height_m = 0.0;
  bool dmd = false;

  static constexpr double kMinHeightM = 0.5;
  static constexpr double kMaxHeightM = 2.5;

  /// Throws ErrorKind::validation outside [0.5, 2.5] m.
  static SubjectProfile make(double height_m, bool dmd);
};

}  // namespace gaitfft
