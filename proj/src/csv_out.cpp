#include "gaitfft/csv_out.hpp"

#include <cstdio>
#include <ostream>

namespace gaitfft {

std::string format6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value == 0.0 ? 0.0 : value);
  return buf;
}

void write_windows_csv(std::ostream& out, const std::vector<WindowMetrics>& metrics) {
  out << "index,t_start,active_s,step_frequency_hz,steps,step_length_m,distance_m,velocity_mps\n";
  for (const auto& m : metrics) {
    out << m.index << ',' << format6(m.t_start) << ',' << format6(m.active_s) << ','
        << format6(m.step_frequency_hz) << ',' << format6(m.steps) << ','
        << format6(m.step_length_m) << ',' << format6(m.distance_m) << ','
        << format6(m.velocity_mps) << '\n';
  }
}

void write_surface_csv(std::ostream& out, const std::vector<SurfacePoint>& grid) {
  out << "sf,h,dmd,step_length_m\n";
  for (const auto& p : grid) {
    out << format6(p.sf_hz) << ',' << format6(p.height_m) << ',' << (p.dmd ? 1 : 0) << ','
        << format6(p.step_length_m) << '\n';
  }
}

void write_recording_csv(std::ostream& out, const AccelRecording& rec) {
  out << "t,x,y,z\n";
  char tbuf[32];
  for (Eigen::Index i = 0; i < rec.size(); ++i) {
    std::snprintf(tbuf, sizeof(tbuf), "%.6f", rec.t(i));
    out << tbuf << ',' << format6(rec.x(i)) << ',' << format6(rec.y(i)) << ','
        << format6(rec.z(i)) << '\n';
  }
}

}  // namespace gaitfft
