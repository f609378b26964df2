#include "gaitfft/step_length.hpp"

namespace gaitfft {
namespace {

double grid_value(GridRange r, int i, int n) {
  if (n == 1) return r.lo;
  return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

std::vector<SurfacePoint> surface_grid(GridRange sf_range, GridRange h_range, int n, bool dmd) {
  if (n < 1) throw Error(ErrorKind::validation, "surface grid: size must be at least 1");
  if (!(sf_range.hi >= sf_range.lo) || !(h_range.hi >= h_range.lo)) {
    throw Error(ErrorKind::validation, "surface grid: empty range");
  }
  if (sf_range.lo < 0.0 || h_range.lo <= 0.0) {
    throw Error(ErrorKind::validation, "surface grid: range outside the model domain");
  }

  std::vector<SurfacePoint> grid;
  grid.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double sf = grid_value(sf_range, i, n);
    for (int j = 0; j < n; ++j) {
      const double h = grid_value(h_range, j, n);
      const auto p = predict_step_length(sf, SubjectProfile{h, dmd});
      grid.push_back({sf, h, dmd, p.length_m});
    }
  }
  return grid;
}

}  // namespace gaitfft
