#include "gaitfft/types.hpp"

#include <cmath>

namespace gaitfft {

std::string_view to_string(Unit unit) {
  return unit == Unit::g ? "g" : "ms2";
}

Unit parse_unit(std::string_view text) {
  if (text == "g") return Unit::g;
  if (text == "ms2" || text == "m/s2" || text == "m/s^2") return Unit::ms2;
  throw Error(ErrorKind::parse, "unknown unit '" + std::string(text) + "' (expected g or ms2)");
}

SubjectProfile SubjectProfile::make(double height_m, bool dmd) {
  if (!std::isfinite(height_m) || height_m < kMinHeightM || height_m > kMaxHeightM) {
    throw Error(ErrorKind::validation,
                "standing height " + std::to_string(height_m) +
                    " m is outside the supported range [0.5, 2.5] m");
  }
  return SubjectProfile{height_m, dmd};
}

}  // namespace gaitfft
