#pragma once

#include "gaitfft/ingest.hpp"
#include "gaitfft/pipeline.hpp"
#include "gaitfft/step_length.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gaitfft {

/// "%.6g" formatting used for every emitted value.
std::string format6(double value);

/// index,t_start,active_s,step_frequency_hz,steps,step_length_m,distance_m,velocity_mps
void write_windows_csv(std::ostream& out, const std::vector<WindowMetrics>& metrics);

/// sf,h,dmd,step_length_m
void write_surface_csv(std::ostream& out, const std::vector<SurfacePoint>& grid);

/// t,x,y,z with time in fixed microseconds so long recordings keep their grid.
void write_recording_csv(std::ostream& out, const AccelRecording& rec);

}  // namespace gaitfft
