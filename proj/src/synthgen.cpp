#include "gaitfft/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gaitfft {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class UniformNoise {
 public:
  explicit UniformNoise(std::uint64_t seed) : engine_(seed) {}

  double operator()(double amplitude) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return amplitude * (2.0 * u - 1.0);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

double GaitScenario::duration_s() const {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.duration_s;
  return total;
}

void GaitScenario::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::scenario, msg); };
  if (segments.empty()) fail("scenario has no segments");
  if (!(sample_rate_hz >= kMinSampleRateHz) || !std::isfinite(sample_rate_hz)) {
    fail("scenario sample rate must be at least 10 Hz");
  }
  if (!(noise_amplitude >= 0.0) || !std::isfinite(noise_amplitude)) {
    fail("noise amplitude must be finite and non-negative");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    const std::string where = "segment " + std::to_string(i) + ": ";
    if (!(seg.duration_s > 0.0) || !std::isfinite(seg.duration_s)) {
      fail(where + "duration must be positive");
    }
    if (seg.cadence_hz != 0.0 && !(seg.cadence_hz >= 0.3 && seg.cadence_hz <= 4.6)) {
      fail(where + "cadence " + std::to_string(seg.cadence_hz) +
           " Hz is outside {0} U [0.3, 4.6] Hz");
    }
    if (!(seg.amplitude >= 0.0) || !std::isfinite(seg.amplitude)) {
      fail(where + "amplitude must be finite and non-negative");
    }
    if (!(seg.harmonic2_ratio >= 0.0 && seg.harmonic2_ratio < 1.0)) {
      fail(where + "harmonic2_ratio must lie in [0, 1)");
    }
  }
}

SyntheticRecording generate(const GaitScenario& scenario, double window_s) {
  scenario.validate();
  const double rate = scenario.sample_rate_hz;
  const double total = scenario.duration_s();
  const auto n = static_cast<Eigen::Index>(std::llround(total * rate));

  SyntheticRecording out;
  auto& rec = out.recording;
  rec.t.resize(n);
  rec.x.resize(n);
  rec.y.resize(n);
  rec.z.resize(n);
  rec.sample_rate_hz = rate;
  rec.uniform = true;
  rec.unit = scenario.unit;
  rec.axis_convention = "z";

  // Segment start times and start phases.
  std::vector<double> seg_start(scenario.segments.size());
  std::vector<double> seg_phase(scenario.segments.size());
  double t0 = 0.0;
  double phase = 0.0;
  for (std::size_t s = 0; s < scenario.segments.size(); ++s) {
    seg_start[s] = t0;
    seg_phase[s] = phase;
    phase += kTwoPi * scenario.segments[s].cadence_hz * scenario.segments[s].duration_s;
    t0 += scenario.segments[s].duration_s;
  }

  UniformNoise noise(scenario.seed);
  std::size_t s = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    while (s + 1 < scenario.segments.size() && t >= seg_start[s + 1] - 1e-12) ++s;
    const auto& seg = scenario.segments[s];
    double z = 0.0;
    if (seg.cadence_hz > 0.0) {
      const double phi = seg_phase[s] + kTwoPi * seg.cadence_hz * (t - seg_start[s]);
      z = seg.amplitude * (std::sin(phi) + seg.harmonic2_ratio * std::sin(2.0 * phi));
    }
    rec.t(i) = t;
    rec.z(i) = z + noise(scenario.noise_amplitude);
    rec.x(i) = noise(kLateralNoise);
    rec.y(i) = noise(kLateralNoise);
  }

  auto& truth = out.truth;
  truth.total_duration_s = total;
  for (std::size_t k = 0; k < scenario.segments.size(); ++k) {
    const auto& seg = scenario.segments[k];
    const double steps = seg.cadence_hz * seg.duration_s;
    truth.segment_steps.push_back(steps);
    truth.total_steps += steps;
    if (seg.cadence_hz <= 0.0) continue;
    truth.active_duration_s += seg.duration_s;

    // Crests at phi = pi/2 + 2 pi j inside [start, end).
    const double start = seg_start[k];
    const double end = start + seg.duration_s;
    const double first_cycle = std::ceil((seg_phase[k] - std::numbers::pi / 2) / kTwoPi - 1e-12);
    for (double j = first_cycle;; j += 1.0) {
      const double crest_phase = std::numbers::pi / 2 + kTwoPi * j;
      const double tc = start + (crest_phase - seg_phase[k]) / (kTwoPi * seg.cadence_hz);
      if (tc >= end) break;
      truth.step_times.push_back(tc);
    }
  }

  const auto n_windows = static_cast<int>(std::floor(total / window_s + 1e-9));
  for (int w = 0; w < n_windows; ++w) {
    const double ws = w * window_s;
    const double we = ws + window_s;
    double best_overlap = 0.0;
    double cadence = 0.0;
    for (std::size_t k = 0; k < scenario.segments.size(); ++k) {
      const auto& seg = scenario.segments[k];
      if (seg.cadence_hz <= 0.0) continue;
      const double overlap =
          std::min(we, seg_start[k] + seg.duration_s) - std::max(ws, seg_start[k]);
      if (overlap > best_overlap) {
        best_overlap = overlap;
        cadence = seg.cadence_hz;
      }
    }
    truth.window_frequency_hz.push_back(cadence);
  }
  return out;
}

}  // namespace gaitfft
