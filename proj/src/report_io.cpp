#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "vcontract/error.hpp"
#include "vcontract/report.hpp"

namespace vcontract {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::ConfigError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("field \"") + key + "\": " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_as<T>(j, key);
}

double number_or(const Json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number_from_json(j.at(key));
}

std::vector<double> numbers(const Json& j) {
  if (!j.is_array()) bad("expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from_json(x));
  return out;
}

std::string_view to_string(EstimateMethod m) {
  return m == EstimateMethod::exact ? "exact" : "monte_carlo";
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string emit_csv(const ReportDocument& doc) {
  std::ostringstream os;
  os << "kind,label,inequality_id,lhs,rhs,ratio,verdict,method,value,draws,ci_half_width,"
        "confidence,seed,runtime_ms\n";
  for (const auto& e : doc.estimates) {
    const auto& est = e.estimate;
    os << "estimate," << csv_field(e.label) << ",,,,,," << to_string(est.method) << ','
       << format_double(est.value) << ',' << est.draws << ',' << format_double(est.ci_half_width)
       << ',' << format_double(est.confidence) << ',' << est.seed << ','
       << format_double(est.runtime_ms) << '\n';
  }
  for (const auto& r : doc.reports) {
    os << "report,," << to_string(r.id) << ',' << format_double(r.lhs) << ','
       << format_double(r.rhs) << ',' << format_double(r.ratio) << ',' << to_string(r.verdict)
       << ',' << csv_field(r.method) << ",,,,,," << format_double(r.runtime_ms) << '\n';
  }
  return os.str();
}

}  // namespace

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  bad("expected a number, got " + j.dump());
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reports and estimates

Json to_json(const BoundReport& r) {
  Json j;
  j["id"] = std::string(to_string(r.id));
  j["lhs"] = json_number(r.lhs);
  j["rhs"] = json_number(r.rhs);
  j["ratio"] = json_number(r.ratio);
  j["verdict"] = std::string(to_string(r.verdict));
  j["method"] = r.method;
  Json comps = Json::object();
  for (const auto& [name, value] : r.components) comps[name] = json_number(value);
  j["components"] = std::move(comps);
  j["notes"] = r.notes;
  j["runtime_ms"] = json_number(r.runtime_ms);
  return j;
}

BoundReport bound_report_from_json(const Json& j) {
  BoundReport r;
  const auto id = parse_inequality_id(get_as<std::string>(j, "id"));
  if (!id) bad("unknown inequality id " + field(j, "id").dump());
  r.id = *id;
  r.lhs = number_from_json(field(j, "lhs"));
  r.rhs = number_from_json(field(j, "rhs"));
  r.ratio = number_from_json(field(j, "ratio"));
  const auto verdict = parse_verdict(get_as<std::string>(j, "verdict"));
  if (!verdict) bad("unknown verdict " + field(j, "verdict").dump());
  r.verdict = *verdict;
  r.method = get_or<std::string>(j, "method", "");
  if (j.contains("components"))
    for (const auto& [name, value] : j.at("components").items())
      r.components.emplace_back(name, number_from_json(value));
  r.notes = get_or<std::vector<std::string>>(j, "notes", {});
  r.runtime_ms = number_or(j, "runtime_ms", 0.0);
  return r;
}

Json to_json(const RademacherEstimate& e) {
  Json j;
  j["value"] = json_number(e.value);
  j["method"] = std::string(to_string(e.method));
  j["draws"] = e.draws;
  j["ci_half_width"] = json_number(e.ci_half_width);
  j["confidence"] = json_number(e.confidence);
  j["seed"] = e.seed;
  j["runtime_ms"] = json_number(e.runtime_ms);
  return j;
}

RademacherEstimate estimate_from_json(const Json& j) {
  RademacherEstimate e;
  e.value = number_from_json(field(j, "value"));
  const auto method = get_as<std::string>(j, "method");
  if (method == "exact") e.method = EstimateMethod::exact;
  else if (method == "monte_carlo") e.method = EstimateMethod::monte_carlo;
  else bad("unknown estimate method " + method);
  e.draws = get_or<std::uint64_t>(j, "draws", 0);
  e.ci_half_width = number_or(j, "ci_half_width", 0.0);
  e.confidence = number_or(j, "confidence", 1.0);
  e.seed = get_or<std::uint64_t>(j, "seed", 0);
  e.runtime_ms = number_or(j, "runtime_ms", 0.0);
  return e;
}

Json to_json(const SuiteSummary& s) {
  Json j;
  j["seed"] = s.seed;
  j["instances"] = s.instances;
  Json by = Json::object();
  for (const auto& [name, st] : s.by_inequality) {
    by[name] = {{"count", st.count},           {"holds", st.holds},
                {"violated", st.violated},     {"diagnostic", st.diagnostic},
                {"max_ratio", json_number(st.max_ratio)}, {"all_finite", st.all_finite}};
  }
  j["by_inequality"] = std::move(by);
  j["max_fitted_rv_constant"] = json_number(s.max_fitted_rv_constant);
  j["max_thm1_ratio"] = json_number(s.max_thm1_ratio);
  j["max_thm3_ratio"] = json_number(s.max_thm3_ratio);
  j["certified_violations"] = s.certified_violations;
  return j;
}

// ---------------------------------------------------------------------------
// Documents

std::string emit(const ReportDocument& doc, OutputFormat format) {
  if (format == OutputFormat::csv) return emit_csv(doc);
  Json j;
  j["schema_version"] = doc.schema_version;
  j["tool"] = doc.tool;
  j["tool_version"] = doc.tool_version;
  j["command"] = doc.command;
  j["config"] = doc.config;
  j["seed"] = doc.seed;
  if (doc.timestamp) j["timestamp"] = *doc.timestamp;
  Json estimates = Json::array();
  for (const auto& e : doc.estimates) {
    Json item;
    item["label"] = e.label;
    const Json fields = to_json(e.estimate);
    for (const auto& [k, v] : fields.items()) item[k] = v;
    estimates.push_back(std::move(item));
  }
  j["estimates"] = std::move(estimates);
  Json reports = Json::array();
  for (const auto& r : doc.reports) reports.push_back(to_json(r));
  j["reports"] = std::move(reports);
  j["extras"] = doc.extras;
  Json errors = Json::array();
  for (const auto& e : doc.errors) errors.push_back({{"kind", e.kind}, {"message", e.message}});
  j["errors"] = std::move(errors);
  j["overall_verdict"] = doc.overall_verdict;
  j["exit_status"] = doc.exit_status;
  return j.dump(2) + "\n";
}

ReportDocument parse_document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed document: ") + e.what());
  }
  ReportDocument doc;
  doc.schema_version = get_as<int>(j, "schema_version");
  if (doc.schema_version != kSchemaVersion)
    bad("unsupported schema_version " + std::to_string(doc.schema_version));
  doc.tool = get_as<std::string>(j, "tool");
  doc.tool_version = get_as<std::string>(j, "tool_version");
  doc.command = get_as<std::string>(j, "command");
  doc.config = get_or<Json>(j, "config", Json::object());
  doc.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("timestamp")) doc.timestamp = get_as<std::string>(j, "timestamp");
  for (const auto& e : get_or<Json>(j, "estimates", Json::array()))
    doc.estimates.push_back({get_or<std::string>(e, "label", ""), estimate_from_json(e)});
  for (const auto& r : get_or<Json>(j, "reports", Json::array()))
    doc.reports.push_back(bound_report_from_json(r));
  doc.extras = get_or<Json>(j, "extras", Json::object());
  for (const auto& e : get_or<Json>(j, "errors", Json::array()))
    doc.errors.push_back({get_as<std::string>(e, "kind"), get_as<std::string>(e, "message")});
  doc.overall_verdict = get_as<std::string>(j, "overall_verdict");
  doc.exit_status = get_as<int>(j, "exit_status");
  return doc;
}

void strip_volatile(ReportDocument& doc) {
  doc.timestamp.reset();
  for (auto& r : doc.reports) r.runtime_ms = 0.0;
  for (auto& e : doc.estimates) e.estimate.runtime_ms = 0.0;
}

// ---------------------------------------------------------------------------
// Classes, samples, maps

Json to_json(const FunctionClass& cls) {
  Json j;
  Json domain;
  domain["size"] = cls.domain().size;
  if (!cls.domain().labels.empty()) domain["labels"] = cls.domain().labels;
  j["domain"] = std::move(domain);
  j["num_functions"] = cls.num_functions();
  j["output_dim"] = cls.output_dim();
  Json values = Json::array();
  for (std::size_t m = 0; m < cls.num_functions(); ++m) {
    Json fm = Json::array();
    for (std::size_t x = 0; x < cls.domain().size; ++x) {
      Json v = Json::array();
      for (double y : cls.at(m, x)) v.push_back(json_number(y));
      fm.push_back(std::move(v));
    }
    values.push_back(std::move(fm));
  }
  j["values"] = std::move(values);
  return j;
}

namespace {

BuiltinSpec builtin_from_json(const Json& j) {
  BuiltinSpec b;
  const auto family = get_as<std::string>(j, "family");
  if (family == "random_table") b.family = BuiltinSpec::Family::random_table;
  else if (family == "hyperplane_grid") b.family = BuiltinSpec::Family::hyperplane_grid;
  else if (family == "kmeans_distance") b.family = BuiltinSpec::Family::kmeans_distance;
  else if (family == "sign_product") b.family = BuiltinSpec::Family::sign_product;
  else bad("unknown builtin family " + family);
  b.num_functions = get_or<std::size_t>(j, "num_functions", b.num_functions);
  b.domain_size = get_or<std::size_t>(j, "domain_size", b.domain_size);
  b.output_dim = get_or<std::size_t>(j, "output_dim", b.output_dim);
  b.bound = number_or(j, "bound", b.bound);
  b.input_dim = get_or<std::size_t>(j, "input_dim", b.input_dim);
  b.grid_points = get_or<std::size_t>(j, "grid_points", b.grid_points);
  b.quantum = number_or(j, "quantum", b.quantum);
  if (j.contains("weights")) b.weights = numbers(j.at("weights"));
  if (j.contains("points")) b.points = numbers(j.at("points"));
  if (j.contains("centers")) b.centers = numbers(j.at("centers"));
  b.seed = get_or<std::uint64_t>(j, "seed", b.seed);
  return b;
}

}  // namespace

FunctionClass function_class_from_json(const Json& j) {
  if (j.is_object() && j.contains("builtin")) return make_builtin_class(builtin_from_json(j.at("builtin")));
  const Json& values = field(j, "values");
  if (!values.is_array() || values.empty()) bad("\"values\" must be a non-empty [m][x][k] array");
  const std::size_t M = values.size();
  const std::size_t X = values.at(0).is_array() ? values.at(0).size() : 0;
  if (X == 0) bad("\"values\" rows must be non-empty arrays");
  const bool scalar = !values.at(0).at(0).is_array();
  const std::size_t K = scalar ? 1 : values.at(0).at(0).size();

  Domain domain = Domain::of_size(X);
  if (j.contains("domain")) {
    const Json& d = j.at("domain");
    if (get_or<std::size_t>(d, "size", X) != X) bad("domain size does not match \"values\"");
    domain.labels = get_or<std::vector<std::string>>(d, "labels", {});
  }
  if (get_or<std::size_t>(j, "num_functions", M) != M) bad("num_functions does not match \"values\"");
  if (get_or<std::size_t>(j, "output_dim", K) != K) bad("output_dim does not match \"values\"");

  std::vector<double> flat;
  flat.reserve(M * X * K);
  for (const auto& fm : values) {
    if (!fm.is_array() || fm.size() != X) bad("every function needs one value per domain point");
    for (const auto& v : fm) {
      if (scalar) {
        flat.push_back(number_from_json(v));
        continue;
      }
      if (!v.is_array() || v.size() != K) bad("every value needs K coordinates");
      for (const auto& y : v) flat.push_back(number_from_json(y));
    }
  }
  return FunctionClass(std::move(domain), M, K, std::move(flat));
}

Json to_json(const Sample& s) { return Json{{"points", s.points()}}; }

Sample sample_from_json(const Json& j) {
  const Json& pts = j.is_array() ? j : field(j, "points");
  try {
    return Sample(pts.get<std::vector<std::size_t>>());
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("sample points: ") + e.what());
  }
}

Json to_json(const LipschitzMap& m) {
  Json j;
  j["family"] = std::string(to_string(m.family()));
  switch (m.family()) {
    case LipschitzMap::Family::projection: j["coordinate"] = m.coordinate(); break;
    case LipschitzMap::Family::softmax: j["temperature"] = json_number(m.temperature()); break;
    case LipschitzMap::Family::affine:
      j["weights"] = m.pieces().front().weights;
      j["bias"] = json_number(m.pieces().front().bias);
      break;
    case LipschitzMap::Family::max_affine: {
      Json pieces = Json::array();
      for (const auto& p : m.pieces())
        pieces.push_back({{"weights", p.weights}, {"bias", json_number(p.bias)}});
      j["pieces"] = std::move(pieces);
      break;
    }
    default: break;
  }
  if (m.in_scale() != 1.0) j["in_scale"] = json_number(m.in_scale());
  if (m.out_scale() != 1.0) j["out_scale"] = json_number(m.out_scale());
  return j;
}

LipschitzMap lipschitz_map_from_json(const Json& j) {
  const auto family = get_as<std::string>(j, "family");
  LipschitzMap m = LipschitzMap::max();
  if (family == "projection") {
    m = LipschitzMap::projection(get_as<std::size_t>(j, "coordinate"));
  } else if (family == "max") {
  } else if (family == "neg_min") {
    m = LipschitzMap::neg_min();
  } else if (family == "softmax") {
    m = LipschitzMap::softmax(number_or(j, "temperature", 1.0));
  } else if (family == "affine") {
    m = LipschitzMap::affine(numbers(field(j, "weights")), number_or(j, "bias", 0.0));
  } else if (family == "max_affine") {
    std::vector<AffinePiece> pieces;
    for (const auto& p : field(j, "pieces"))
      pieces.push_back({numbers(field(p, "weights")), number_or(p, "bias", 0.0)});
    m = LipschitzMap::max_affine(std::move(pieces));
  } else {
    bad("unknown Lipschitz map family " + family);
  }
  const double in = number_or(j, "in_scale", 1.0);
  const double out = number_or(j, "out_scale", 1.0);
  if (in != 1.0 || out != 1.0) m = m.rescaled(in, out);
  return m;
}

Json to_json(const LipschitzSeq& phi) {
  Json j;
  Json maps = Json::array();
  for (const auto& m : phi.maps) maps.push_back(to_json(m));
  j["maps"] = std::move(maps);
  j["declared_lipschitz"] = json_number(phi.declared_lipschitz);
  j["norm_p"] = json_number(phi.norm_p);
  if (phi.declared_output_bound) j["declared_output_bound"] = json_number(*phi.declared_output_bound);
  return j;
}

LipschitzSeq lipschitz_seq_from_json(const Json& j, std::optional<std::size_t> n) {
  LipschitzSeq phi;
  if (j.contains("maps")) {
    for (const auto& m : j.at("maps")) phi.maps.push_back(lipschitz_map_from_json(m));
    if (n && phi.maps.size() != *n)
      fail(ErrorKind::ArityMismatch, "phi has " + std::to_string(phi.maps.size()) +
                                         " maps but the sample has length " + std::to_string(*n));
  } else {
    const std::size_t count = get_or<std::size_t>(j, "n", n.value_or(0));
    if (count == 0) bad("a broadcast \"map\" needs \"n\" or a sample");
    phi.maps.assign(count, lipschitz_map_from_json(field(j, "map")));
  }
  phi.norm_p = number_or(j, "norm_p", kInfNorm);
  phi.declared_lipschitz = j.contains("declared_lipschitz")
                               ? number_from_json(j.at("declared_lipschitz"))
                               : phi.analytic_constant(phi.norm_p);
  if (j.contains("declared_output_bound"))
    phi.declared_output_bound = number_from_json(j.at("declared_output_bound"));
  return phi;
}

}  // namespace vcontract
