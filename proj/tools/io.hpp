#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "entmon/certify.hpp"
#include "entmon/states.hpp"

namespace entmon::io {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kStateFormat = "entmon-state";
inline constexpr std::string_view kReportFormat = "entmon-report";
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// Malformed input; the message names the offending field or line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json state_to_json(const DensityOperator& rho);
/// Validates every field and the density-operator invariants.
DensityOperator state_from_json(const Json& j);

std::string write_state(const DensityOperator& rho);
DensityOperator parse_state(std::string_view text);
DensityOperator read_state_file(const std::string& path);

/// Witness input states are not stored; `replay` regenerates them from the seed.
struct ReportDocument {
  std::string tool_version{kToolVersion};
  std::string measure;
  CheckConfig config;
  /// Frank-Wolfe gap used for ree; absent for other measures.
  std::optional<double> ree_convergence_tol;
  bool expected_monotone = true;
  bool matches_expectation = false;
  Certification certification;
  /// Seconds per check; only present when requested.
  std::vector<NamedValue> timings;
};

Json report_to_json(const ReportDocument& doc);
ReportDocument report_from_json(const Json& j);

std::string write_report(const ReportDocument& doc);
ReportDocument parse_report(std::string_view text);

}  // namespace entmon::io
