#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vcontract/bounds.hpp"
#include "vcontract/complexity.hpp"
#include "vcontract/experiments.hpp"
#include "vcontract/lipschitz.hpp"
#include "vcontract/model.hpp"

namespace vcontract {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "1.0.0";

struct EstimateEntry {
  std::string label;
  RademacherEstimate estimate;
  bool operator==(const EstimateEntry&) const = default;
};

struct ErrorEntry {
  std::string kind;
  std::string message;
  bool operator==(const ErrorEntry&) const = default;
};

struct ReportDocument {
  int schema_version = kSchemaVersion;
  std::string tool = "vcontract";
  std::string tool_version{kToolVersion};
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  std::optional<std::string> timestamp;
  std::vector<BoundReport> reports;
  std::vector<EstimateEntry> estimates;
  Json extras = Json::object();
  std::vector<ErrorEntry> errors;
  std::string overall_verdict = "holds";
  int exit_status = 0;

  bool operator==(const ReportDocument&) const = default;
};

enum class OutputFormat { json, csv };

std::optional<OutputFormat> parse_format(std::string_view name);

/// JSON: ordered keys, schema_version first; non-finite numbers are written
/// as the strings "inf", "-inf" and "nan".
/// CSV: header plus one row per estimate and per report, fixed columns.
std::string emit(const ReportDocument& doc, OutputFormat format);

/// Inverse of emit(doc, json). Throws ConfigError on malformed input.
ReportDocument parse_document(std::string_view text);

/// Zeroes every runtime field and drops the timestamp.
void strip_volatile(ReportDocument& doc);

Json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const Json& j);
Json to_json(const RademacherEstimate& e);
RademacherEstimate estimate_from_json(const Json& j);
Json to_json(const SuiteSummary& s);

/// Classes: {"domain": {"size", "labels"}, "num_functions", "output_dim",
/// "values": [m][x][k]} or {"builtin": {...}}. A "values" tensor may also be
/// [m][x] for K = 1.
Json to_json(const FunctionClass& cls);
FunctionClass function_class_from_json(const Json& j);

/// {"points": [...]} or a bare array of domain indices.
Json to_json(const Sample& s);
Sample sample_from_json(const Json& j);

/// {"maps": [...]} one per timestep, or {"map": {...}, "n": n} broadcast;
/// "declared_lipschitz", "norm_p" (number or "inf"), "declared_output_bound".
Json to_json(const LipschitzMap& m);
LipschitzMap lipschitz_map_from_json(const Json& j);
Json to_json(const LipschitzSeq& phi);
LipschitzSeq lipschitz_seq_from_json(const Json& j, std::optional<std::size_t> n = std::nullopt);

/// Number or the strings "inf" / "-inf" / "nan".
Json json_number(double x);
double number_from_json(const Json& j);

}  // namespace vcontract
