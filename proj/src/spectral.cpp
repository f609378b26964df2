#include "gaitfft/spectral.hpp"

namespace gaitfft {

const char* to_string(SelectionRule rule) {
  switch (rule) {
    case SelectionRule::none_in_band:
      return "none_in_band";
    case SelectionRule::dominant_peak:
      return "dominant_peak";
    case SelectionRule::subharmonic_peak:
      return "subharmonic_peak";
  }
  return "unknown";
}

}  // namespace gaitfft
