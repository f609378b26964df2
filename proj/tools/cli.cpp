#include "cli.hpp"

#include "gaitfft/agreement.hpp"
#include "gaitfft/calibration.hpp"
#include "gaitfft/csv_out.hpp"
#include "gaitfft/ingest.hpp"
#include "gaitfft/json_io.hpp"
#include "gaitfft/pipeline.hpp"
#include "gaitfft/step_length.hpp"
#include "gaitfft/synthgen.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#ifndef GAITFFT_VERSION
#define GAITFFT_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace gaitfft::cli {

ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io:
      return ExitCode::io;
    case ErrorKind::parse:
      return ExitCode::parse;
    case ErrorKind::validation:
      return ExitCode::validation;
    case ErrorKind::calibration:
      return ExitCode::calibration;
    case ErrorKind::length_mismatch:
      return ExitCode::length_mismatch;
    case ErrorKind::scenario:
      return ExitCode::scenario;
  }
  return ExitCode::internal;
}

namespace {

// Effective run configuration: defaults, then config file, then flags.
struct RunConfig {
  std::optional<double> height_m;
  bool dmd = false;
  double window_s = 5.0;
  double band_lo_hz = 0.3;
  double band_hi_hz = 4.6;
  double ratio = 0.6;
  Unit unit = Unit::g;
  TimeUnit time_unit = TimeUnit::seconds;
  std::string col_t = "t", col_x = "x", col_y = "y", col_z = "z";
  std::optional<double> resample_hz;
  double min_step_separation_s = 0.4;
  std::string calibration_profile;
  std::string calibration_recording;
  std::optional<double> threshold;

  IngestOptions ingest() const {
    IngestOptions o;
    o.time_column = col_t;
    o.x_column = col_x;
    o.y_column = col_y;
    o.z_column = col_z;
    o.time_unit = time_unit;
    o.unit = unit;
    return o;
  }

  SelectionOptions selection() const {
    SelectionOptions s;
    s.band_lo_hz = band_lo_hz;
    s.band_hi_hz = band_hi_hz;
    s.ratio = ratio;
    return s;
  }

  Json to_json() const {
    Json j;
    j["height_m"] = height_m ? number(*height_m) : Json(nullptr);
    j["dmd"] = dmd;
    j["window_s"] = number(window_s);
    j["band_hz"] = Json::array({number(band_lo_hz), number(band_hi_hz)});
    j["ratio"] = number(ratio);
    j["units"] = std::string(gaitfft::to_string(unit));
    j["time_unit"] = time_unit == TimeUnit::milliseconds ? "ms" : "s";
    j["columns"] = Json{{"t", col_t}, {"x", col_x}, {"y", col_y}, {"z", col_z}};
    j["resample_hz"] = resample_hz ? number(*resample_hz) : Json("auto");
    j["min_step_separation_s"] = number(min_step_separation_s);
    Json cal;
    cal["profile"] = calibration_profile.empty() ? Json(nullptr) : Json(calibration_profile);
    cal["recording"] = calibration_recording.empty() ? Json(nullptr) : Json(calibration_recording);
    cal["threshold"] = threshold ? number(*threshold) : Json(nullptr);
    j["calibration"] = std::move(cal);
    return j;
  }
};

TimeUnit parse_time_unit(const std::string& s) {
  if (s == "s") return TimeUnit::seconds;
  if (s == "ms") return TimeUnit::milliseconds;
  throw Error(ErrorKind::parse, "unknown time unit '" + s + "' (expected s or ms)");
}

std::string read_file(const fs::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + what + " '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir.string() + "'");
}

// Records every input file read during a run.
class Inputs {
 public:
  std::string read(const std::string& path, const std::string& what) {
    auto bytes = read_file(path, what);
    Json j;
    j["role"] = what;
    j["path"] = path;
    j["bytes"] = bytes.size();
    j["sha256"] = sha256_hex(bytes);
    entries_.push_back(std::move(j));
    return bytes;
  }

  AccelRecording recording(const std::string& path, const RunConfig& cfg,
                           const std::string& what) {
    std::istringstream in(read(path, what));
    return resample_uniform(parse_recording(in, cfg.ingest()), cfg.resample_hz);
  }

  Json to_json() const {
    Json arr = Json::array();
    for (const auto& e : entries_) arr.push_back(e);
    return arr;
  }

 private:
  std::vector<Json> entries_;
};

Json metadata(const std::string& command, const Json& config, const Inputs& inputs) {
  Json m;
  m["tool"] = "gaitfft";
  m["version"] = GAITFFT_VERSION;
  m["command"] = command;
  m["config"] = config;
  m["inputs"] = inputs.to_json();
  return m;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::istringstream in(read_file(path, "config file"));
  const Json j = parse_json(in, "config file '" + path + "'");
  try {
    if (j.contains("subject")) {
      const auto& s = j.at("subject");
      if (s.contains("height_m")) cfg.height_m = s.at("height_m").get<double>();
      cfg.dmd = s.value("dmd", cfg.dmd);
    }
    cfg.window_s = j.value("window_s", cfg.window_s);
    if (j.contains("band_hz")) {
      cfg.band_lo_hz = j.at("band_hz").at(0).get<double>();
      cfg.band_hi_hz = j.at("band_hz").at(1).get<double>();
    }
    cfg.ratio = j.value("ratio", cfg.ratio);
    if (j.contains("units")) cfg.unit = parse_unit(j.at("units").get<std::string>());
    if (j.contains("time_unit")) cfg.time_unit = parse_time_unit(j.at("time_unit").get<std::string>());
    if (j.contains("columns")) {
      const auto& c = j.at("columns");
      cfg.col_t = c.value("t", cfg.col_t);
      cfg.col_x = c.value("x", cfg.col_x);
      cfg.col_y = c.value("y", cfg.col_y);
      cfg.col_z = c.value("z", cfg.col_z);
    }
    if (j.contains("resample_hz") && j.at("resample_hz").is_number()) {
      cfg.resample_hz = j.at("resample_hz").get<double>();
    }
    cfg.min_step_separation_s = j.value("min_step_separation_s", cfg.min_step_separation_s);
    if (j.contains("calibration")) {
      const auto& c = j.at("calibration");
      if (c.contains("profile") && c.at("profile").is_string()) cfg.calibration_profile = c.at("profile");
      if (c.contains("recording") && c.at("recording").is_string()) cfg.calibration_recording = c.at("recording");
      if (c.contains("threshold") && c.at("threshold").is_number()) cfg.threshold = c.at("threshold").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "config file '" + path + "': " + e.what());
  }
}

// Raw flag values; applied over the config file only when given.
struct Flags {
  std::string config_path;
  std::string units;
  std::string out_dir;
  bool dump_spectra = false;

  std::string time_unit;
  std::string col_t, col_x, col_y, col_z;
  double resample_hz = 0.0;
  double min_sep = 0.4;
  double height = 0.0;
  bool dmd = false;
  double window_s = 5.0;
  double band_lo = 0.3, band_hi = 4.6, ratio = 0.6;
  std::string cal_profile, cal_recording;
  double threshold = 0.0;
};

struct Opts {
  CLI::Option* units = nullptr;
  CLI::Option* time_unit = nullptr;
  CLI::Option* col_t = nullptr;
  CLI::Option* col_x = nullptr;
  CLI::Option* col_y = nullptr;
  CLI::Option* col_z = nullptr;
  CLI::Option* resample = nullptr;
  CLI::Option* min_sep = nullptr;
  CLI::Option* height = nullptr;
  CLI::Option* dmd = nullptr;
  CLI::Option* window = nullptr;
  CLI::Option* band_lo = nullptr;
  CLI::Option* band_hi = nullptr;
  CLI::Option* ratio = nullptr;
  CLI::Option* cal_profile = nullptr;
  CLI::Option* cal_recording = nullptr;
  CLI::Option* threshold = nullptr;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

RunConfig effective_config(const Flags& f, const Opts& o) {
  RunConfig cfg;
  if (!f.config_path.empty()) apply_config_file(cfg, f.config_path);
  if (given(o.units)) cfg.unit = parse_unit(f.units);
  if (given(o.time_unit)) cfg.time_unit = parse_time_unit(f.time_unit);
  if (given(o.col_t)) cfg.col_t = f.col_t;
  if (given(o.col_x)) cfg.col_x = f.col_x;
  if (given(o.col_y)) cfg.col_y = f.col_y;
  if (given(o.col_z)) cfg.col_z = f.col_z;
  if (given(o.resample)) cfg.resample_hz = f.resample_hz;
  if (given(o.min_sep)) cfg.min_step_separation_s = f.min_sep;
  if (given(o.height)) cfg.height_m = f.height;
  if (given(o.dmd)) cfg.dmd = f.dmd;
  if (given(o.window)) cfg.window_s = f.window_s;
  if (given(o.band_lo)) cfg.band_lo_hz = f.band_lo;
  if (given(o.band_hi)) cfg.band_hi_hz = f.band_hi;
  if (given(o.ratio)) cfg.ratio = f.ratio;
  if (given(o.cal_profile)) cfg.calibration_profile = f.cal_profile;
  if (given(o.cal_recording)) cfg.calibration_recording = f.cal_recording;
  if (given(o.threshold)) cfg.threshold = f.threshold;
  return cfg;
}

void add_ingest_flags(CLI::App* cmd, Flags& f, Opts& o) {
  o.time_unit = cmd->add_option("--time-unit", f.time_unit, "Time column unit: s or ms");
  o.col_t = cmd->add_option("--col-t", f.col_t, "Time column name");
  o.col_x = cmd->add_option("--col-x", f.col_x, "X axis column name");
  o.col_y = cmd->add_option("--col-y", f.col_y, "Y axis column name");
  o.col_z = cmd->add_option("--col-z", f.col_z, "Anteroposterior axis column name");
  o.resample = cmd->add_option("--rate", f.resample_hz, "Resampling rate in Hz (default: auto)");
}

// --- calibrate --------------------------------------------------------------

int cmd_calibrate(const RunConfig& cfg, const std::string& input, const std::string& out_dir,
                  std::ostream& out, std::ostream& err) {
  Inputs inputs;
  const auto rec = inputs.recording(input, cfg, "calibration recording");
  PeakOptions peaks;
  peaks.min_step_separation_s = cfg.min_step_separation_s;
  const auto profile = calibrate(rec, peaks);

  Json j = to_json(profile);
  j["metadata"] = metadata("calibrate", cfg.to_json(), inputs);
  const auto text = dump(j);
  if (out_dir.empty()) {
    out << text;
  } else {
    ensure_dir(out_dir);
    write_file(fs::path(out_dir) / "calibration.json", text);
    err << "wrote " << (fs::path(out_dir) / "calibration.json").string() << '\n';
  }
  return 0;
}

// --- analyze ----------------------------------------------------------------

CalibrationProfile resolve_calibration(const RunConfig& cfg, Inputs& inputs) {
  const int sources = (!cfg.calibration_profile.empty()) + (!cfg.calibration_recording.empty()) +
                      (cfg.threshold.has_value());
  if (sources == 0) {
    throw Error(ErrorKind::validation,
                "no calibration given: use --calibration, --calibration-recording or --threshold");
  }
  if (sources > 1) {
    throw Error(ErrorKind::validation, "give exactly one calibration source");
  }
  if (!cfg.calibration_profile.empty()) {
    std::istringstream in(inputs.read(cfg.calibration_profile, "calibration profile"));
    return calibration_from_json(parse_json(in, "calibration profile"));
  }
  if (!cfg.calibration_recording.empty()) {
    PeakOptions peaks;
    peaks.min_step_separation_s = cfg.min_step_separation_s;
    return calibrate(inputs.recording(cfg.calibration_recording, cfg, "calibration recording"),
                     peaks);
  }
  return explicit_threshold(*cfg.threshold, cfg.unit);
}

int cmd_analyze(const RunConfig& cfg, const std::string& input, const std::string& out_dir,
                bool dump_spectra, std::ostream& out, std::ostream& err) {
  if (!cfg.height_m) {
    throw Error(ErrorKind::validation, "subject height is required (--height or config subject.height_m)");
  }
  const auto subject = SubjectProfile::make(*cfg.height_m, cfg.dmd);
  Inputs inputs;
  const auto cal = resolve_calibration(cfg, inputs);
  const auto rec = inputs.recording(input, cfg, "recording");

  PipelineOptions popts;
  popts.window_s = cfg.window_s;
  popts.selection = cfg.selection();
  const auto result = analyze_recording(rec, cal, subject, popts, dump_spectra);
  const auto metrics = result.metrics();

  int clamped = 0, floored = 0;
  Json windows = Json::array();
  for (const auto& m : metrics) {
    clamped += m.sf_clamped;
    floored += m.sl_floored;
    windows.push_back(to_json(m));
  }

  Json meta = metadata("analyze", cfg.to_json(), inputs);
  meta["calibration"] = to_json(cal);
  meta["sf_clamped_windows"] = clamped;
  meta["sl_floored_windows"] = floored;

  Json j;
  j["metadata"] = std::move(meta);
  j["summary"] = to_json(result.summary);
  j["windows"] = std::move(windows);

  Json spectra = Json::array();
  if (dump_spectra) {
    for (const auto& w : result.windows) {
      Json s;
      s["index"] = w.metrics.index;
      s["decision"] = to_json(w.decision);
      s["spectrum"] = to_json(*w.spectrum);
      spectra.push_back(std::move(s));
    }
  }

  if (clamped > 0) err << "warning: step frequency clamped in " << clamped << " window(s)\n";
  if (floored > 0) err << "warning: negative step length floored in " << floored << " window(s)\n";

  if (out_dir.empty()) {
    if (dump_spectra) j["spectra"] = std::move(spectra);
    out << dump(j);
    return 0;
  }
  ensure_dir(out_dir);
  const fs::path dir(out_dir);
  std::ostringstream csv;
  write_windows_csv(csv, metrics);
  write_file(dir / "windows.csv", csv.str());
  write_file(dir / "analysis.json", dump(j));
  if (dump_spectra) write_file(dir / "spectra.json", dump(spectra));
  err << "wrote " << (dir / "analysis.json").string() << '\n';
  return 0;
}

// --- stats ------------------------------------------------------------------

bool is_json_path(const std::string& path) {
  auto ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".json";
}

void collect_json_values(const Json& j, const std::string& field, std::vector<double>& out,
                         const std::string& path) {
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) collect_json_values(e, field, out, path);
  } else if (j.is_object() && j.contains("summary") && j.at("summary").contains(field)) {
    out.push_back(j.at("summary").at(field).get<double>());
  } else if (j.is_object() && j.contains(field) && j.at(field).is_number()) {
    out.push_back(j.at(field).get<double>());
  } else {
    throw Error(ErrorKind::parse, "'" + path + "' has no numeric field '" + field + "'");
  }
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& text, const std::string& path,
                                                  std::size_t want_cols) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> cols(want_cols);
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\t')) ++end;
      if (end == cell.c_str() || (end && *end != '\0')) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (line_no == 1) continue;  // header
      throw Error(ErrorKind::parse, "'" + path + "': non-numeric value at line " + std::to_string(line_no));
    }
    if (row.size() < want_cols) {
      throw Error(ErrorKind::parse, "'" + path + "': expected " + std::to_string(want_cols) +
                                        " column(s) at line " + std::to_string(line_no));
    }
    for (std::size_t c = 0; c < want_cols; ++c) cols[c].push_back(row[c]);
  }
  return cols;
}

std::vector<double> load_values(const std::vector<std::string>& paths, const std::string& field,
                                Inputs& inputs, const std::string& role) {
  std::vector<double> values;
  for (const auto& path : paths) {
    const auto text = inputs.read(path, role);
    if (is_json_path(path)) {
      std::istringstream in(text);
      collect_json_values(parse_json(in, "'" + path + "'"), field, values, path);
    } else {
      const auto cols = read_numeric_csv(text, path, 1);
      values.insert(values.end(), cols[0].begin(), cols[0].end());
    }
  }
  return values;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "n/a";
  return format6(v);
}

std::string text_table(const AgreementReport<double>& r) {
  std::ostringstream os;
  char line[512];
  const std::string label = r.metric + (r.units.empty() ? "" : " (" + r.units + ")");
  std::snprintf(line, sizeof(line), "%-22s | %-30s | %-30s | %-28s | %-22s | %s\n", "Metric",
                "PB slope (95% CI)", "PB intercept (95% CI)", "BA mean % diff (95% CI)",
                "Limits of agreement (%)", "Lin's CCC");
  os << line;
  os << std::string(160, '-') << '\n';
  const std::string slope = fmt(r.pb.slope) + " (" + fmt(r.pb.slope_ci_lo) + ", " + fmt(r.pb.slope_ci_hi) + ")";
  const std::string icpt = fmt(r.pb.intercept) + " (" + fmt(r.pb.intercept_ci_lo) + ", " +
                           fmt(r.pb.intercept_ci_hi) + ")";
  const std::string ba = fmt(r.ba.mean_pct_diff) + " (" + fmt(r.ba.ci95_lo) + ", " + fmt(r.ba.ci95_hi) + ")";
  const std::string loa = fmt(r.ba.loa_lo) + " to " + fmt(r.ba.loa_hi);
  std::snprintf(line, sizeof(line), "%-22s | %-30s | %-30s | %-28s | %-22s | %s\n", label.c_str(),
                slope.c_str(), icpt.c_str(), ba.c_str(), loa.c_str(), fmt(r.ccc).c_str());
  os << line << '\n';
  os << "n = " << r.n << '\n';
  os << "MdAE [IQR]:  " << fmt(r.errors.mdae.median) << " [" << fmt(r.errors.mdae.q1) << "-"
     << fmt(r.errors.mdae.q3) << "]\n";
  os << "MdAPE [IQR]: " << fmt(r.errors.mdape.median) << "% [" << fmt(r.errors.mdape.q1) << "-"
     << fmt(r.errors.mdape.q3) << "]\n";
  auto yn = [](bool b) { return b ? "pass" : "fail"; };
  os << "slope in acceptance range: " << yn(r.flags.slope_acceptable)
     << "; intercept within tolerance: " << yn(r.flags.intercept_acceptable)
     << "; slope CI contains 1: " << (r.pb.ci_available ? yn(r.flags.slope_ci_contains_one) : "n/a")
     << "; intercept CI contains 0: "
     << (r.pb.ci_available ? yn(r.flags.intercept_ci_contains_zero) : "n/a")
     << "; CCC strong: " << yn(r.flags.ccc_strong) << "; CCC acceptable: " << yn(r.flags.ccc_acceptable)
     << '\n';
  return os.str();
}

struct StatsArgs {
  std::string pairs;
  std::vector<std::string> est;
  std::vector<std::string> ref;
  std::string field = "total_steps";
  std::string metric;
  std::string units;
  int min_pairs = 3;
  int pb_ci_min_n = 10;
  std::string percent_base = "pair_mean";
  std::string format = "json";
  AgreementThresholds thresholds;
};

int cmd_stats(const StatsArgs& a, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  Inputs inputs;
  std::vector<double> est, ref;
  if (!a.pairs.empty()) {
    if (!a.est.empty() || !a.ref.empty()) {
      throw Error(ErrorKind::validation, "use either --pairs or --est/--ref, not both");
    }
    const auto cols = read_numeric_csv(inputs.read(a.pairs, "pairs"), a.pairs, 2);
    est = cols[0];
    ref = cols[1];
  } else {
    if (a.est.empty() || a.ref.empty()) {
      throw Error(ErrorKind::validation, "stats needs --pairs or both --est and --ref");
    }
    est = load_values(a.est, a.field, inputs, "estimates");
    ref = load_values(a.ref, a.field, inputs, "reference");
  }
  if (est.size() != ref.size()) {
    throw Error(ErrorKind::length_mismatch, "estimate and reference lengths differ: " +
                                                std::to_string(est.size()) + " vs " +
                                                std::to_string(ref.size()));
  }
  if (static_cast<int>(est.size()) < std::max(3, a.min_pairs)) {
    throw Error(ErrorKind::length_mismatch, "need at least " + std::to_string(std::max(3, a.min_pairs)) +
                                                " pairs, got " + std::to_string(est.size()));
  }

  AgreementOptions opts;
  opts.pb_ci_min_n = a.pb_ci_min_n;
  opts.thresholds = a.thresholds;
  if (a.percent_base == "reference") {
    opts.percent_base = PercentBase::reference;
  } else if (a.percent_base != "pair_mean") {
    throw Error(ErrorKind::parse, "unknown percent base '" + a.percent_base + "'");
  }

  const auto metric = a.metric.empty() ? a.field : a.metric;
  const auto series = PairedSeries<double>::make(
      Eigen::Map<const Eigen::VectorXd>(est.data(), static_cast<Eigen::Index>(est.size())),
      Eigen::Map<const Eigen::VectorXd>(ref.data(), static_cast<Eigen::Index>(ref.size())), metric,
      a.units);
  const auto report = compare(series, opts);

  Json config;
  config["field"] = a.field;
  config["min_pairs"] = a.min_pairs;
  config["pb_ci_min_n"] = a.pb_ci_min_n;
  config["percent_base"] = a.percent_base;
  config["thresholds"] = Json{{"slope", Json::array({number(a.thresholds.slope_lo), number(a.thresholds.slope_hi)})},
                              {"intercept_fraction", number(a.thresholds.intercept_fraction)},
                              {"ccc_strong", number(a.thresholds.ccc_strong)},
                              {"ccc_acceptable", number(a.thresholds.ccc_acceptable)}};
  Json j;
  j["metadata"] = metadata("stats", config, inputs);
  j["report"] = to_json(report);
  const auto json_text = dump(j);
  const auto table = text_table(report);

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_file(fs::path(out_dir) / "agreement.json", json_text);
    write_file(fs::path(out_dir) / "agreement.txt", table);
    err << "wrote " << (fs::path(out_dir) / "agreement.json").string() << '\n';
  }
  if (a.format == "json" || a.format == "both") out << json_text;
  if (a.format == "text" || a.format == "both") out << table;
  return 0;
}

// --- synth ------------------------------------------------------------------

int cmd_synth(const std::string& scenario_path, const std::string& out_dir, std::string name,
              std::ostream& err) {
  Inputs inputs;
  std::istringstream in(inputs.read(scenario_path, "scenario"));
  Json raw;
  try {
    raw = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::scenario, "scenario '" + scenario_path + "': " + e.what());
  }
  const auto scenario = scenario_from_json(raw);
  const auto gen = generate(scenario);

  if (name.empty()) name = fs::path(scenario_path).stem().string();
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  ensure_dir(dir);

  std::ostringstream csv;
  write_recording_csv(csv, gen.recording);
  write_file(dir / (name + ".csv"), csv.str());

  Json truth = to_json(gen.truth);
  Json meta = metadata("synth", to_json(scenario), inputs);
  truth["metadata"] = std::move(meta);
  write_file(dir / (name + ".truth.json"), dump(truth));
  err << "wrote " << (dir / (name + ".csv")).string() << " and "
      << (dir / (name + ".truth.json")).string() << '\n';
  return 0;
}

// --- surface ----------------------------------------------------------------

struct SurfaceArgs {
  double sf_lo = 0.3, sf_hi = 4.6;
  double h_lo = 0.9, h_hi = 1.9;
  int n = 25;
  bool dmd = false;
};

int cmd_surface(const SurfaceArgs& a, const std::string& out_dir, std::ostream& out,
                std::ostream& err) {
  const auto grid = surface_grid({a.sf_lo, a.sf_hi}, {a.h_lo, a.h_hi}, a.n, a.dmd);
  std::ostringstream csv;
  write_surface_csv(csv, grid);
  if (out_dir.empty()) {
    out << csv.str();
  } else {
    ensure_dir(out_dir);
    write_file(fs::path(out_dir) / "surface.csv", csv.str());
    err << "wrote " << (fs::path(out_dir) / "surface.csv").string() << '\n';
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Step frequency, step length and gait summaries from a waist-worn accelerometer"};
  app.set_version_flag("--version", GAITFFT_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  Opts o;
  app.add_option("--config", f.config_path, "JSON run configuration");
  o.units = app.add_option("--units", f.units, "Acceleration units: g or ms2");
  app.add_option("--out", f.out_dir, "Output directory");
  app.add_flag("--dump-spectra", f.dump_spectra, "Include per-window spectra in the output");

  std::string input;

  auto* calibrate_cmd = app.add_subcommand("calibrate", "Derive the activity threshold from a slow-walk recording");
  calibrate_cmd->add_option("input", input, "Slow-walk recording CSV")->required();
  add_ingest_flags(calibrate_cmd, f, o);
  o.min_sep = calibrate_cmd->add_option("--min-step-separation", f.min_sep, "Minimum seconds between step peaks");

  auto* analyze_cmd = app.add_subcommand("analyze", "Windowed step analysis and gait summary");
  analyze_cmd->add_option("input", input, "Recording CSV")->required();
  add_ingest_flags(analyze_cmd, f, o);
  o.height = analyze_cmd->add_option("--height", f.height, "Standing height in meters");
  o.dmd = analyze_cmd->add_flag("--dmd", f.dmd, "Subject has a DMD diagnosis");
  o.window = analyze_cmd->add_option("--window", f.window_s, "Window length in seconds");
  o.band_lo = analyze_cmd->add_option("--band-lo", f.band_lo, "Lower edge of the step band (Hz)");
  o.band_hi = analyze_cmd->add_option("--band-hi", f.band_hi, "Upper edge of the step band (Hz)");
  o.ratio = analyze_cmd->add_option("--ratio", f.ratio, "Lower-peak frequency and magnitude ratio");
  o.cal_profile = analyze_cmd->add_option("--calibration", f.cal_profile, "Calibration profile JSON");
  o.cal_recording =
      analyze_cmd->add_option("--calibration-recording", f.cal_recording, "Slow-walk recording CSV");
  o.threshold = analyze_cmd->add_option("--threshold", f.threshold, "Explicit activity threshold");
  o.min_sep = analyze_cmd->add_option("--min-step-separation", f.min_sep, "Minimum seconds between step peaks");

  StatsArgs sa;
  auto* stats_cmd = app.add_subcommand("stats", "Agreement statistics for paired estimates");
  stats_cmd->add_option("--pairs", sa.pairs, "Two-column CSV of est,ref");
  stats_cmd->add_option("--est", sa.est, "Estimate files (CSV column or analysis JSON)");
  stats_cmd->add_option("--ref", sa.ref, "Reference files (CSV column or ground-truth JSON)");
  stats_cmd->add_option("--field", sa.field, "JSON field to pair");
  stats_cmd->add_option("--metric", sa.metric, "Metric label");
  stats_cmd->add_option("--metric-units", sa.units, "Units label");
  stats_cmd->add_option("--min-pairs", sa.min_pairs, "Minimum number of pairs");
  stats_cmd->add_option("--pb-ci-min-n", sa.pb_ci_min_n, "Minimum n for Passing-Bablok intervals");
  stats_cmd->add_option("--percent-base", sa.percent_base, "pair_mean or reference");
  stats_cmd->add_option("--format", sa.format, "json, text or both")
      ->check(CLI::IsMember({"json", "text", "both"}));
  stats_cmd->add_option("--slope-lo", sa.thresholds.slope_lo);
  stats_cmd->add_option("--slope-hi", sa.thresholds.slope_hi);
  stats_cmd->add_option("--intercept-fraction", sa.thresholds.intercept_fraction);
  stats_cmd->add_option("--ccc-strong", sa.thresholds.ccc_strong);
  stats_cmd->add_option("--ccc-acceptable", sa.thresholds.ccc_acceptable);

  std::string name;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic recording and its ground truth");
  synth_cmd->add_option("scenario", input, "Scenario JSON")->required();
  synth_cmd->add_option("--name", name, "Output file stem (default: scenario file stem)");

  SurfaceArgs surf;
  auto* surface_cmd = app.add_subcommand("surface", "Step-length surface over frequency and height");
  surface_cmd->add_option("--sf-lo", surf.sf_lo);
  surface_cmd->add_option("--sf-hi", surf.sf_hi);
  surface_cmd->add_option("--h-lo", surf.h_lo);
  surface_cmd->add_option("--h-hi", surf.h_hi);
  surface_cmd->add_option("-n,--size", surf.n, "Grid points per axis");
  surface_cmd->add_flag("--dmd", surf.dmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (calibrate_cmd->parsed()) {
      return cmd_calibrate(effective_config(f, o), input, f.out_dir, out, err);
    }
    if (analyze_cmd->parsed()) {
      return cmd_analyze(effective_config(f, o), input, f.out_dir, f.dump_spectra, out, err);
    }
    if (stats_cmd->parsed()) return cmd_stats(sa, f.out_dir, out, err);
    if (synth_cmd->parsed()) return cmd_synth(input, f.out_dir, name, err);
    if (surface_cmd->parsed()) return cmd_surface(surf, f.out_dir, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::internal);
  }
  return static_cast<int>(ExitCode::usage);
}

}  // namespace gaitfft::cli
