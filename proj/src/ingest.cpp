#include "gaitfft/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>
#include <vector>

namespace gaitfft {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::size_t column_index(const std::vector<std::string_view>& header,
                         const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), std::string_view(name));
  if (it == header.end()) {
    throw Error(ErrorKind::parse, "missing required column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

double median_step(const Eigen::VectorXd& t) {
  std::vector<double> dt(static_cast<std::size_t>(t.size() - 1));
  for (Eigen::Index i = 1; i < t.size(); ++i) {
    dt[static_cast<std::size_t>(i - 1)] = t(i) - t(i - 1);
  }
  const auto mid = dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2);
  std::nth_element(dt.begin(), mid, dt.end());
  if (dt.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(dt.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

AccelRecording parse_recording(std::istream& csv, const IngestOptions& options) {
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(csv, header_line)) {
    ++line_no;
    if (line_no == 1 && header_line.rfind("\xEF\xBB\xBF", 0) == 0) {
      header_line.erase(0, 3);
    }
    if (!trim(header_line).empty()) break;
  }
  if (trim(header_line).empty()) {
    throw Error(ErrorKind::parse, "empty input: expected a header row");
  }
  header = split_fields(header_line);

  const std::size_t cols[4] = {
      column_index(header, options.time_column), column_index(header, options.x_column),
      column_index(header, options.y_column), column_index(header, options.z_column)};
  const double time_scale = options.time_unit == TimeUnit::milliseconds ? 1e-3 : 1.0;

  std::vector<double> t, x, y, z;
  while (std::getline(csv, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    double values[4];
    for (int k = 0; k < 4; ++k) {
      if (cols[k] >= fields.size() || !parse_double(fields[cols[k]], values[k]) ||
          !std::isfinite(values[k])) {
        throw Error(ErrorKind::parse, "malformed row at line " + std::to_string(line_no));
      }
    }
    const double ti = values[0] * time_scale;
    if (!t.empty() && !(ti > t.back())) {
      throw Error(ErrorKind::parse, "non-monotone timestamp at line " +
                                        std::to_string(line_no) +
                                        " (unsorted or duplicated samples)");
    }
    t.push_back(ti);
    x.push_back(values[1]);
    y.push_back(values[2]);
    z.push_back(values[3]);
  }
  if (t.size() < 2) {
    throw Error(ErrorKind::parse, "recording needs at least 2 data rows, got " +
                                      std::to_string(t.size()));
  }

  AccelRecording rec;
  const auto n = static_cast<Eigen::Index>(t.size());
  rec.t = Eigen::Map<const Eigen::VectorXd>(t.data(), n).array() - t.front();
  rec.x = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  rec.y = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  rec.z = Eigen::Map<const Eigen::VectorXd>(z.data(), n);
  rec.unit = options.unit;
  rec.axis_convention = options.z_column;

  for (Eigen::Index i = 1; i < n; ++i) {
    if (rec.t(i) - rec.t(i - 1) > options.max_gap_s) {
      throw Error(ErrorKind::validation,
                  "dropout of " + std::to_string(rec.t(i) - rec.t(i - 1)) +
                      " s before t = " + std::to_string(rec.t(i)) +
                      " s exceeds the 1 s gap limit");
    }
  }
  return rec;
}

AccelRecording load_recording(const std::filesystem::path& path,
                              const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open recording '" + path.string() + "'");
  }
  return parse_recording(in, options);
}

AccelRecording resample_uniform(const AccelRecording& rec, std::optional<double> target_hz) {
  if (rec.size() < 2) {
    throw Error(ErrorKind::validation, "resampling needs at least 2 samples");
  }
  const double native_hz = 1.0 / median_step(rec.t);
  if (native_hz < kMinSampleRateHz) {
    throw Error(ErrorKind::validation,
                "data too sparse: median sampling rate " + std::to_string(native_hz) +
                    " Hz is below 10 Hz");
  }
  const double rate = target_hz ? *target_hz : std::round(native_hz);
  if (!std::isfinite(rate) || rate < kMinSampleRateHz) {
    throw Error(ErrorKind::validation, "target rate must be at least 10 Hz");
  }

  const double t_last = rec.span_s();
  const auto n = static_cast<Eigen::Index>(std::floor(t_last * rate + 1e-9)) + 1;

  AccelRecording out;
  out.t.resize(n);
  out.x.resize(n);
  out.y.resize(n);
  out.z.resize(n);
  out.sample_rate_hz = rate;
  out.uniform = true;
  out.unit = rec.unit;
  out.axis_convention = rec.axis_convention;

  constexpr double kKnotTol = 1e-9;
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i) / rate;
    out.t(i) = ti;
    while (k + 1 < rec.size() && rec.t(k + 1) <= ti + kKnotTol) ++k;
    if (std::abs(rec.t(k) - ti) <= kKnotTol || k + 1 == rec.size()) {
      out.x(i) = rec.x(k);
      out.y(i) = rec.y(k);
      out.z(i) = rec.z(k);
      continue;
    }
    const double w = (ti - rec.t(k)) / (rec.t(k + 1) - rec.t(k));
    out.x(i) = rec.x(k) + w * (rec.x(k + 1) - rec.x(k));
    out.y(i) = rec.y(k) + w * (rec.y(k + 1) - rec.y(k));
    out.z(i) = rec.z(k) + w * (rec.z(k + 1) - rec.z(k));
  }
  return out;
}

}  // namespace gaitfft
