#include "gaitfft/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>

namespace gaitfft {

double sig6(double value) {
  if (!std::isfinite(value) || value == 0.0) return value == 0.0 ? 0.0 : value;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return std::strtod(buf, nullptr);
}

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return sig6(value);
}

Json to_json(const CalibrationProfile& p) {
  Json j;
  j["threshold"] = number(p.threshold);
  j["mu_peaks"] = number(p.mu_peaks);
  j["sigma_peaks"] = number(p.sigma_peaks);
  j["n_steps_m"] = p.n_steps_m;
  j["unit"] = std::string(to_string(p.unit));
  j["source"] = p.source;
  return j;
}

CalibrationProfile calibration_from_json(const Json& j) {
  try {
    CalibrationProfile p;
    p.threshold = j.at("threshold").get<double>();
    p.mu_peaks = j.at("mu_peaks").get<double>();
    p.sigma_peaks = j.at("sigma_peaks").get<double>();
    p.n_steps_m = j.at("n_steps_m").get<int>();
    p.unit = parse_unit(j.at("unit").get<std::string>());
    p.source = j.value("source", std::string("sc_l1"));
    if (!std::isfinite(p.threshold) || p.sigma_peaks < 0.0) {
      throw Error(ErrorKind::parse, "calibration profile: invalid threshold or sigma");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("calibration profile: ") + e.what());
  }
}

Json to_json(const Spectrum<double>& s) {
  Json j;
  j["resolution_hz"] = number(s.resolution_hz);
  Json freqs = Json::array();
  Json mags = Json::array();
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    freqs.push_back(number(s.freqs(k)));
    mags.push_back(number(s.mags(k)));
  }
  j["freqs"] = std::move(freqs);
  j["mags"] = std::move(mags);
  return j;
}

namespace {

Json peak_json(const std::optional<SpectralPeak>& p) {
  if (!p) return nullptr;
  Json j;
  j["freq_hz"] = number(p->freq_hz);
  j["magnitude"] = number(p->magnitude);
  return j;
}

Json median_iqr_json(const MedianIqr<double>& m) {
  Json j;
  j["median"] = number(m.median);
  j["q1"] = number(m.q1);
  j["q3"] = number(m.q3);
  return j;
}

}  // namespace

Json to_json(const StepFrequencyDecision& d) {
  Json j;
  j["frequency_hz"] = number(d.frequency_hz);
  j["rule"] = to_string(d.rule);
  j["dominant"] = peak_json(d.dominant);
  j["candidate"] = peak_json(d.candidate);
  return j;
}

Json to_json(const WindowMetrics& m) {
  Json j;
  j["index"] = m.index;
  j["t_start"] = number(m.t_start);
  j["duration_s"] = number(m.duration_s);
  j["active_s"] = number(m.active_s);
  j["step_frequency_hz"] = number(m.step_frequency_hz);
  j["steps"] = number(m.steps);
  j["step_length_m"] = number(m.step_length_m);
  j["distance_m"] = number(m.distance_m);
  j["velocity_mps"] = number(m.velocity_mps);
  j["sf_clamped"] = m.sf_clamped;
  j["sl_floored"] = m.sl_floored;
  return j;
}

Json to_json(const GaitSummary& s) {
  Json j;
  j["total_duration_s"] = number(s.total_duration_s);
  j["active_duration_s"] = number(s.active_duration_s);
  j["total_steps"] = number(s.total_steps);
  j["total_steps_rounded"] = s.total_steps_rounded;
  j["avg_step_frequency_hz"] = number(s.avg_step_frequency_hz);
  j["avg_step_length_m"] = number(s.avg_step_length_m);
  j["avg_step_velocity_mps"] = number(s.avg_step_velocity_mps);
  j["total_distance_m"] = number(s.total_distance_m);
  j["p95_step_velocity_mps"] = number(s.p95_step_velocity_mps);
  j["n_windows"] = s.n_windows;
  return j;
}

Json to_json(const AgreementReport<double>& r) {
  Json j;
  j["metric"] = r.metric;
  j["units"] = r.units;
  j["n"] = r.n;

  Json ba;
  ba["mean_pct_diff"] = number(r.ba.mean_pct_diff);
  ba["sd_pct_diff"] = number(r.ba.sd_pct_diff);
  ba["ci95_lo"] = number(r.ba.ci95_lo);
  ba["ci95_hi"] = number(r.ba.ci95_hi);
  ba["loa_lo"] = number(r.ba.loa_lo);
  ba["loa_hi"] = number(r.ba.loa_hi);
  j["ba"] = std::move(ba);

  Json pb;
  pb["slope"] = number(r.pb.slope);
  pb["slope_ci95"] = Json::array({number(r.pb.slope_ci_lo), number(r.pb.slope_ci_hi)});
  pb["intercept"] = number(r.pb.intercept);
  pb["intercept_ci95"] =
      Json::array({number(r.pb.intercept_ci_lo), number(r.pb.intercept_ci_hi)});
  pb["ci_available"] = r.pb.ci_available;
  j["pb"] = std::move(pb);

  j["ccc"] = number(r.ccc);
  j["mdae"] = median_iqr_json(r.errors.mdae);
  j["mdape"] = median_iqr_json(r.errors.mdape);

  Json flags;
  flags["slope_acceptable"] = r.flags.slope_acceptable;
  flags["intercept_acceptable"] = r.flags.intercept_acceptable;
  flags["slope_ci_contains_one"] = r.flags.slope_ci_contains_one;
  flags["intercept_ci_contains_zero"] = r.flags.intercept_ci_contains_zero;
  flags["ccc_strong"] = r.flags.ccc_strong;
  flags["ccc_acceptable"] = r.flags.ccc_acceptable;
  j["flags"] = std::move(flags);
  return j;
}

Json to_json(const GaitScenario& sc) {
  Json j;
  j["sample_rate_hz"] = number(sc.sample_rate_hz);
  j["noise_amplitude"] = number(sc.noise_amplitude);
  j["seed"] = sc.seed;
  j["units"] = std::string(to_string(sc.unit));
  Json segs = Json::array();
  for (const auto& s : sc.segments) {
    Json js;
    js["duration_s"] = number(s.duration_s);
    js["cadence_hz"] = number(s.cadence_hz);
    js["amplitude"] = number(s.amplitude);
    js["harmonic2_ratio"] = number(s.harmonic2_ratio);
    segs.push_back(std::move(js));
  }
  j["segments"] = std::move(segs);
  return j;
}

GaitScenario scenario_from_json(const Json& j) {
  GaitScenario sc;
  try {
    sc.sample_rate_hz = j.value("sample_rate_hz", 100.0);
    sc.noise_amplitude = j.value("noise_amplitude", 0.0);
    sc.seed = j.value("seed", std::uint64_t{0});
    sc.unit = parse_unit(j.value("units", std::string("g")));
    for (const auto& js : j.at("segments")) {
      GaitSegment seg;
      seg.duration_s = js.at("duration_s").get<double>();
      seg.cadence_hz = js.value("cadence_hz", 0.0);
      seg.amplitude = js.value("amplitude", 1.0);
      seg.harmonic2_ratio = js.value("harmonic2_ratio", 0.0);
      sc.segments.push_back(seg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::scenario, std::string("scenario schema: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::scenario, std::string("scenario schema: ") + e.what());
  }
  sc.validate();
  return sc;
}

Json to_json(const GroundTruth& g) {
  Json j;
  j["total_steps"] = number(g.total_steps);
  j["total_duration_s"] = number(g.total_duration_s);
  j["active_duration_s"] = number(g.active_duration_s);
  j["avg_step_frequency_hz"] =
      number(g.total_duration_s > 0.0 ? g.total_steps / g.total_duration_s : 0.0);
  Json seg = Json::array();
  for (double s : g.segment_steps) seg.push_back(number(s));
  j["segment_steps"] = std::move(seg);
  Json wf = Json::array();
  for (double f : g.window_frequency_hz) wf.push_back(number(f));
  j["window_frequency_hz"] = std::move(wf);
  Json st = Json::array();
  for (double t : g.step_times) st.push_back(number(t));
  j["step_times"] = std::move(st);
  return j;
}

Json parse_json(std::istream& in, const std::string& what) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, what + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace gaitfft
