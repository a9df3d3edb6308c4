#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsieve/analytics.hpp"
#include "rsieve/goldbach.hpp"

namespace rsieve {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv, Text };

/// "json", "csv" or "text"; anything else throws ValidationError.
Format parse_format(const std::string& name);

// Rationals are written as {"num": "<decimal>", "den": "<decimal>", "float": <double>}.
// The float is a display aid; parsing reads only num and den.
Json to_json(const Rational& q);
Json to_json(const DensityValue& d);
DensityValue density_from_json(const Json& j);

/// Scheme levels as nested residue lists, e.g. [[1],[0,2],[1,3]].
Json levels_to_json(const std::vector<LevelSelection>& levels);
std::vector<LevelSelection> levels_from_json(const Json& j);
Json scheme_to_json(const SelectionScheme& scheme);

Json to_json(const PartitionReport& r);
PartitionReport partition_report_from_json(const Json& j);

Json to_json(const InvariantViolation& v);
InvariantViolation violation_from_json(const Json& j);

Json to_json(const ScanSummary& s);
ScanSummary scan_summary_from_json(const Json& j);

Json to_json(const ExtremaReport& r);
ExtremaReport extrema_report_from_json(const Json& j);

enum class Outcome { Pass, Fail, ReportOnly };
std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

/// Result of one verification suite. `witness` is present iff outcome == Fail.
struct VerificationRecord {
  std::string suite;
  Json params = Json::object();
  Outcome outcome = Outcome::Pass;
  Json details = Json::object();
  std::optional<Json> witness;
  // Provenance; written to the append log only.
  double seconds = 0;
  std::string version;
  std::string timestamp;
};

/// `with_provenance` adds timing, version and timestamp (log lines only).
Json to_json(const VerificationRecord& r, bool with_provenance = false);
VerificationRecord verification_record_from_json(const Json& j);

/// How a JSON body flattens to CSV: either one row per element of an array
/// field, or (empty rows_key) a single row of the top-level scalar fields.
struct CsvLayout {
  std::string rows_key;
  std::vector<std::string> columns;
};

/// Serializes `body` in the chosen format. JSON is pretty-printed with a
/// trailing newline; text is "key: value" lines.
std::string render(const Json& body, Format format, const CsvLayout& csv = {});

std::string write_report(const PartitionReport& r, Format format);
std::string write_report(const ExtremaReport& r, Format format);
std::string write_report(const ScanSummary& s, Format format);
std::string write_report(const VerificationRecord& r, Format format);

/// Appends one compact JSON line (with provenance) to `path`.
void append_log(const std::string& path, const VerificationRecord& r);

/// Current UTC time as ISO 8601 with second precision.
std::string utc_timestamp();

}  // namespace rsieve
