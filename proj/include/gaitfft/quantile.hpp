#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gaitfft {

/// Quantile by linear interpolation between order statistics (R type 7).
template <typename Scalar>
Scalar quantile_type7(std::vector<Scalar> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const Scalar frac = static_cast<Scalar>(h - static_cast<double>(lo));
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace gaitfft
