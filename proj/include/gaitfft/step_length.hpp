#pragma once

#include "gaitfft/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace gaitfft {

/// Published step-length regression in sqrt(step frequency) and
/// 1/sqrt(height), with an additive block for DMD participants.
///
///   SL = a1*sqrt(sf) + a2/sqrt(h) + a3*sqrt(sf)/sqrt(h) + a0
///        + DMD * (d0 + d1*sqrt(sf) + d2/sqrt(h) + d3*sqrt(sf)/sqrt(h))
struct StepLengthModel {
  static constexpr double a1 = 3.33758;
  static constexpr double a2 = 2.442582;
  static constexpr double a3 = -3.072612;
  static constexpr double a0 = -2.505019;

  static constexpr double d0 = 1.87948;
  static constexpr double d1 = -1.689478;
  static constexpr double d2 = -1.865428;
  static constexpr double d3 = 1.664073;

  /// Step frequencies are clamped into the spectral search band before use.
  static constexpr double sf_min = 0.3;
  static constexpr double sf_max = 4.6;
};

template <typename Scalar>
struct StepLengthPrediction {
  Scalar length_m = Scalar(0);
  /// sf was outside [sf_min, sf_max] and got clamped.
  bool clamped = false;
  /// The regression went negative and was floored at zero.
  bool floored = false;
};

/// Raw regression value with no guards; TD part only.
template <typename Scalar>
Scalar step_length_regression(Scalar sf, Scalar height_m) {
  using std::sqrt;
  const Scalar rs = sqrt(sf);
  const Scalar rh = Scalar(1) / sqrt(height_m);
  return Scalar(StepLengthModel::a1) * rs + Scalar(StepLengthModel::a2) * rh +
         Scalar(StepLengthModel::a3) * (rs * rh) + Scalar(StepLengthModel::a0);
}

template <typename Scalar>
Scalar dmd_adjustment(Scalar sf, Scalar height_m) {
  using std::sqrt;
  const Scalar rs = sqrt(sf);
  const Scalar rh = Scalar(1) / sqrt(height_m);
  return Scalar(StepLengthModel::d0) + Scalar(StepLengthModel::d1) * rs +
         Scalar(StepLengthModel::d2) * rh + Scalar(StepLengthModel::d3) * (rs * rh);
}

/// Step length in meters for a step frequency in Hz.
///
/// sf == 0 means no motion and yields 0 without evaluating the regression.
/// Other frequencies are clamped into [0.3, 4.6] Hz and negative outputs
/// are floored at 0; both events are reported on the result.
template <typename Scalar>
StepLengthPrediction<Scalar> predict_step_length(Scalar sf, const SubjectProfile& subject) {
  using std::isfinite;
  const auto h = static_cast<Scalar>(subject.height_m);
  if (!isfinite(sf) || !isfinite(h)) {
    throw Error(ErrorKind::validation, "step length: non-finite input");
  }
  if (sf < Scalar(0) || !(h > Scalar(0))) {
    throw Error(ErrorKind::validation, "step length: requires sf >= 0 and height > 0");
  }
  StepLengthPrediction<Scalar> out;
  if (sf == Scalar(0)) return out;

  const Scalar lo(StepLengthModel::sf_min);
  const Scalar hi(StepLengthModel::sf_max);
  const Scalar sf_eval = std::clamp(sf, lo, hi);
  out.clamped = sf_eval != sf;

  Scalar sl = step_length_regression(sf_eval, h);
  if (subject.dmd) sl += dmd_adjustment(sf_eval, h);
  if (sl < Scalar(0)) {
    out.floored = true;
    sl = Scalar(0);
  }
  out.length_m = sl;
  return out;
}

struct SurfacePoint {
  double sf_hz;
  double height_m;
  bool dmd;
  double step_length_m;
};

struct GridRange {
  double lo;
  double hi;
};

/// n x n predictions over sf_range x h_range, row-major with sf as the
/// slow index. n == 1 evaluates the lower corner only.
std::vector<SurfacePoint> surface_grid(GridRange sf_range, GridRange h_range, int n, bool dmd);

}  // namespace gaitfft
