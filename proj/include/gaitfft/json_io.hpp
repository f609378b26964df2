#pragma once

#include "gaitfft/agreement.hpp"
#include "gaitfft/calibration.hpp"
#include "gaitfft/pipeline.hpp"
#include "gaitfft/spectral.hpp"
#include "gaitfft/synthgen.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace gaitfft {

using Json = nlohmann::ordered_json;

/// Rounds to 6 significant digits so that emitted numbers are byte-stable.
double sig6(double value);

/// NaN and infinities become null.
Json number(double value);

Json to_json(const CalibrationProfile& profile);
CalibrationProfile calibration_from_json(const Json& j);

Json to_json(const Spectrum<double>& spectrum);
Json to_json(const StepFrequencyDecision& decision);
Json to_json(const WindowMetrics& metrics);
Json to_json(const GaitSummary& summary);
Json to_json(const AgreementReport<double>& report);

Json to_json(const GaitScenario& scenario);
/// Throws ErrorKind::scenario on schema violations.
GaitScenario scenario_from_json(const Json& j);
Json to_json(const GroundTruth& truth);

/// Parses JSON text, mapping syntax errors to ErrorKind::parse.
Json parse_json(std::istream& in, const std::string& what);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace gaitfft
