#include "rsieve/report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace rsieve {

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "text") return Format::Text;
  throw ValidationError("unsupported format '" + name + "' (expected json, csv or text)");
}

Json to_json(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  Json j;
  j["num"] = c.get_num().get_str();
  j["den"] = c.get_den().get_str();
  j["float"] = c.get_d();
  return j;
}

Json to_json(const DensityValue& d) { return to_json(d.exact()); }

DensityValue density_from_json(const Json& j) {
  return DensityValue::of(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
}

Json levels_to_json(const std::vector<LevelSelection>& levels) {
  Json arr = Json::array();
  for (const auto& l : levels) {
    Json row = Json::array();
    for (std::uint32_t r : l.residues()) row.push_back(r);
    arr.push_back(std::move(row));
  }
  return arr;
}

std::vector<LevelSelection> levels_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("scheme levels must be an array of residue lists");
  std::vector<LevelSelection> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty() || row.size() > 2)
      throw ValidationError("level " + std::to_string(out.size() + 1) + " must list one or two residues");
    LevelSelection sel;
    sel.count = static_cast<std::uint8_t>(row.size());
    sel.r[0] = row[0].get<std::uint32_t>();
    sel.r[1] = row.size() == 2 ? row[1].get<std::uint32_t>() : sel.r[0];
    if (sel.count == 2 && sel.r[0] > sel.r[1]) std::swap(sel.r[0], sel.r[1]);
    out.push_back(sel);
  }
  return out;
}

Json scheme_to_json(const SelectionScheme& scheme) {
  Json j;
  j["kind"] = scheme.kind() == SchemeKind::Generic ? "generic" : "even";
  if (scheme.even_x()) j["x"] = *scheme.even_x();
  j["primes"] = std::vector<std::uint32_t>(scheme.basis().primes().begin(), scheme.basis().primes().end());
  j["selected"] = levels_to_json({scheme.levels().begin(), scheme.levels().end()});
  return j;
}

Json to_json(const PartitionReport& r) {
  Json j;
  j["x"] = r.x;
  j["k"] = r.k;
  j["permitted_indices"] = r.permitted_indices;
  j["includes_one"] = r.includes_one;
  j["c_k_x"] = r.c_k_x;
  j["oracle_count"] = r.oracle_count;
  j["derived_lower_bound"] = r.derived_lower_bound;
  return j;
}

PartitionReport partition_report_from_json(const Json& j) {
  PartitionReport r;
  r.x = j.at("x").get<std::uint64_t>();
  r.k = j.at("k").get<std::size_t>();
  r.permitted_indices = j.at("permitted_indices").get<std::vector<std::uint64_t>>();
  r.includes_one = j.at("includes_one").get<bool>();
  r.c_k_x = j.at("c_k_x").get<std::uint64_t>();
  r.oracle_count = j.at("oracle_count").get<std::uint64_t>();
  r.derived_lower_bound = j.at("derived_lower_bound").get<std::uint64_t>();
  return r;
}

Json to_json(const InvariantViolation& v) {
  Json j;
  j["x"] = v.x;
  j["invariant"] = v.invariant;
  j["n"] = v.n;
  j["detail"] = v.detail;
  return j;
}

InvariantViolation violation_from_json(const Json& j) {
  return {j.at("x").get<std::uint64_t>(), j.at("invariant").get<std::string>(), j.at("n").get<std::uint64_t>(),
          j.at("detail").get<std::string>()};
}

namespace {

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> opt_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

Json to_json(const ScanSummary& s) {
  Json j;
  j["x_lo"] = s.x_lo;
  j["x_hi"] = s.x_hi;
  j["stride"] = s.stride;
  j["reports"] = s.reports;
  j["min_c_k_x"] = s.min_c_k_x;
  j["min_c_k_x_at"] = s.min_c_k_x_at;
  j["threshold"] = s.threshold;
  j["min_c_above_threshold"] = opt(s.min_c_above_threshold);
  j["min_c_above_threshold_at"] = opt(s.min_c_above_threshold_at);
  j["min_oracle_count"] = s.min_oracle_count;
  j["min_oracle_count_at"] = s.min_oracle_count_at;
  j["violation_total"] = s.violation_total;
  Json v = Json::array();
  for (const auto& e : s.violations) v.push_back(to_json(e));
  j["violations"] = std::move(v);
  return j;
}

ScanSummary scan_summary_from_json(const Json& j) {
  ScanSummary s;
  s.x_lo = j.at("x_lo").get<std::uint64_t>();
  s.x_hi = j.at("x_hi").get<std::uint64_t>();
  s.stride = j.at("stride").get<std::uint64_t>();
  s.reports = j.at("reports").get<std::uint64_t>();
  s.min_c_k_x = j.at("min_c_k_x").get<std::uint64_t>();
  s.min_c_k_x_at = j.at("min_c_k_x_at").get<std::uint64_t>();
  s.threshold = j.at("threshold").get<std::uint64_t>();
  s.min_c_above_threshold = opt_from<std::uint64_t>(j, "min_c_above_threshold");
  s.min_c_above_threshold_at = opt_from<std::uint64_t>(j, "min_c_above_threshold_at");
  s.min_oracle_count = j.at("min_oracle_count").get<std::uint64_t>();
  s.min_oracle_count_at = j.at("min_oracle_count_at").get<std::uint64_t>();
  s.violation_total = j.at("violation_total").get<std::uint64_t>();
  for (const auto& v : j.at("violations")) s.violations.push_back(violation_from_json(v));
  return s;
}

namespace {

Json to_json(const SchemeDensity& s) {
  Json j;
  j["count"] = s.count.get_str();
  j["density"] = to_json(s.density);
  j["selected"] = levels_to_json(s.levels);
  return j;
}

SchemeDensity scheme_density_from_json(const Json& j) {
  return {levels_from_json(j.at("selected")), BigInt(j.at("count").get<std::string>()), density_from_json(j.at("density"))};
}

Json opt_density(const std::optional<DensityValue>& d) { return d ? to_json(*d) : Json(nullptr); }

std::optional<DensityValue> opt_density_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return density_from_json(j.at(key));
}

}  // namespace

Json to_json(const ExtremaReport& r) {
  Json j;
  j["k"] = r.k;
  j["role"] = r.role == IntervalRole::Left ? "left" : "right";
  j["strategy"] = r.strategy;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["primes"] = r.primes;
  j["delta_k"] = to_json(r.delta_k);
  j["min"] = to_json(r.min);
  j["max"] = to_json(r.max);
  j["min_count_exceeds_half_pk"] = opt(r.min_count_exceeds_half_pk);
  j["counterexample_total"] = r.counterexample_total;
  Json cex = Json::array();
  for (const auto& c : r.counterexamples) cex.push_back(to_json(c));
  j["counterexamples"] = std::move(cex);
  if (r.reference) {
    Json ref;
    ref["h"] = r.reference->h;
    ref["delta_h"] = to_json(r.reference->delta_h);
    ref["min_h"] = to_json(r.reference->min_h);
    ref["max_h"] = to_json(r.reference->max_h);
    ref["alpha"] = opt_density(r.reference->alpha);
    ref["beta"] = opt_density(r.reference->beta);
    j["reference"] = std::move(ref);
  } else {
    j["reference"] = nullptr;
  }
  j["notice"] = opt(r.notice);
  return j;
}

ExtremaReport extrema_report_from_json(const Json& j) {
  ExtremaReport r;
  r.k = j.at("k").get<std::size_t>();
  const auto role = j.at("role").get<std::string>();
  if (role != "left" && role != "right") throw ValidationError("role must be left or right");
  r.role = role == "left" ? IntervalRole::Left : IntervalRole::Right;
  r.strategy = j.at("strategy").get<std::string>();
  r.samples = j.at("samples").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.primes = j.at("primes").get<std::vector<std::uint32_t>>();
  r.delta_k = density_from_json(j.at("delta_k"));
  r.min = scheme_density_from_json(j.at("min"));
  r.max = scheme_density_from_json(j.at("max"));
  r.min_count_exceeds_half_pk = opt_from<bool>(j, "min_count_exceeds_half_pk");
  r.counterexample_total = j.at("counterexample_total").get<std::uint64_t>();
  for (const auto& c : j.at("counterexamples")) r.counterexamples.push_back(scheme_density_from_json(c));
  if (j.contains("reference") && !j.at("reference").is_null()) {
    const auto& ref = j.at("reference");
    ExtremaReport::Reference out;
    out.h = ref.at("h").get<std::size_t>();
    out.delta_h = density_from_json(ref.at("delta_h"));
    out.min_h = density_from_json(ref.at("min_h"));
    out.max_h = density_from_json(ref.at("max_h"));
    out.alpha = opt_density_from(ref, "alpha");
    out.beta = opt_density_from(ref, "beta");
    r.reference = out;
  }
  r.notice = opt_from<std::string>(j, "notice");
  return r;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::ReportOnly: return "report-only";
  }
  return "fail";
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "pass") return Outcome::Pass;
  if (s == "fail") return Outcome::Fail;
  if (s == "report-only") return Outcome::ReportOnly;
  throw ValidationError("unknown outcome '" + s + "'");
}

Json to_json(const VerificationRecord& r, bool with_provenance) {
  Json j;
  j["suite"] = r.suite;
  j["params"] = r.params;
  j["outcome"] = to_string(r.outcome);
  j["details"] = r.details;
  j["witness"] = r.witness ? *r.witness : Json(nullptr);
  if (with_provenance) {
    j["seconds"] = r.seconds;
    j["version"] = r.version;
    j["timestamp"] = r.timestamp;
  }
  return j;
}

VerificationRecord verification_record_from_json(const Json& j) {
  VerificationRecord r;
  r.suite = j.at("suite").get<std::string>();
  r.params = j.at("params");
  r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  r.details = j.at("details");
  if (j.contains("witness") && !j.at("witness").is_null()) r.witness = j.at("witness");
  if (j.contains("seconds")) r.seconds = j.at("seconds").get<double>();
  if (j.contains("version")) r.version = j.at("version").get<std::string>();
  if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
  return r;
}

namespace {

bool is_rational(const Json& v) { return v.is_object() && v.contains("num") && v.contains("den"); }

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (is_rational(v)) return v.at("num").get<std::string>() + "/" + v.at("den").get<std::string>();
  return v.dump();
}

std::string csv_cell(const Json& v) {
  std::string s = scalar_text(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

const Json& at_path(const Json& j, const std::string& path) {
  static const Json null_value = nullptr;
  const Json* cur = &j;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!cur->is_object() || !cur->contains(key)) return null_value;
    cur = &cur->at(key);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return *cur;
}

void csv_line(std::ostringstream& os, const Json& row, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << csv_cell(row.is_object() ? at_path(row, columns[i]) : (i == 0 ? row : Json(nullptr)));
  }
  os << '\n';
}

std::string render_csv(const Json& body, const CsvLayout& layout) {
  std::ostringstream os;
  std::vector<std::string> columns = layout.columns;
  if (layout.rows_key.empty()) {
    if (columns.empty())
      for (const auto& [key, v] : body.items())
        if (!v.is_array() && (!v.is_object() || is_rational(v))) columns.push_back(key);
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    csv_line(os, body, columns);
    return os.str();
  }
  const Json& rows = at_path(body, layout.rows_key);
  if (columns.empty()) columns.push_back(layout.rows_key);
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  if (rows.is_array())
    for (const auto& row : rows) csv_line(os, row, columns);
  return os.str();
}

void render_text(std::ostringstream& os, const Json& body, const std::string& indent) {
  for (const auto& [key, v] : body.items()) {
    if (is_rational(v)) {
      os << indent << key << ": " << scalar_text(v) << " (" << v.at("float").dump() << ")\n";
    } else if (v.is_object()) {
      os << indent << key << ":\n";
      render_text(os, v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      os << indent << key << ": " << v.size() << " entries\n";
      for (const auto& item : v) {
        os << indent << "  -\n";
        render_text(os, item, indent + "    ");
      }
    } else {
      os << indent << key << ": " << (v.is_null() ? "-" : scalar_text(v)) << '\n';
    }
  }
}

}  // namespace

std::string render(const Json& body, Format format, const CsvLayout& csv) {
  switch (format) {
    case Format::Json: return body.dump(2) + "\n";
    case Format::Csv: return render_csv(body, csv);
    case Format::Text: {
      std::ostringstream os;
      render_text(os, body, "");
      return os.str();
    }
  }
  return {};
}

std::string write_report(const PartitionReport& r, Format format) {
  Json body = to_json(r);
  if (format != Format::Csv) return render(body, format);
  // One row per permitted index.
  Json rows = Json::array();
  for (std::uint64_t n : r.permitted_indices) rows.push_back({{"x", r.x}, {"n", n}, {"x_minus_n", r.x - n}});
  return render(Json{{"rows", rows}}, format, {"rows", {"x", "n", "x_minus_n"}});
}

std::string write_report(const ExtremaReport& r, Format format) {
  Json body = to_json(r);
  if (format != Format::Csv) return render(body, format);
  Json rows = Json::array();
  auto add = [&](const char* which, const SchemeDensity& s) {
    rows.push_back({{"k", r.k},
                    {"role", body["role"]},
                    {"which", which},
                    {"count", s.count.get_str()},
                    {"density", to_json(s.density)},
                    {"selected", levels_to_json(s.levels)}});
  };
  add("min", r.min);
  add("max", r.max);
  for (const auto& c : r.counterexamples) add("counterexample", c);
  return render(Json{{"rows", rows}}, format, {"rows", {"k", "role", "which", "count", "density", "selected"}});
}

std::string write_report(const ScanSummary& s, Format format) { return render(to_json(s), format); }

std::string write_report(const VerificationRecord& r, Format format) {
  return render(to_json(r), format, {"", {"suite", "outcome", "params", "details", "witness"}});
}

void append_log(const std::string& path, const VerificationRecord& r) {
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot open log file " + path);
  os << to_json(r, true).dump() << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace rsieve
