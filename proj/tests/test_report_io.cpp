#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vcontract/error.hpp"
#include "vcontract/report.hpp"

using namespace vcontract;

namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

ReportDocument sample_document() {
  ReportDocument doc;
  doc.command = "check eq2_scalar";
  doc.config = Json{{"eps", 0.25}, {"budgets", {{"exact_cap", 20}}}};
  doc.seed = 12345678901234ULL;
  doc.timestamp = "2026-01-01T00:00:00Z";
  BoundReport r;
  r.id = InequalityId::lemma3_fat;
  r.lhs = 0.1 + 0.2;
  r.rhs = std::numeric_limits<double>::infinity();
  r.ratio = 1.0 / 3.0;
  r.set("R_n", 1.875);
  r.set("threshold", -0.0);
  r.set("tiny", 5e-324);
  r.verdict = Verdict::holds;
  r.method = "R_n=exact;fat=exact";
  r.notes = {"a note, with a comma"};
  r.runtime_ms = 1.25;
  doc.reports.push_back(r);
  RademacherEstimate e;
  e.value = 0.7071067811865476;
  e.method = EstimateMethod::monte_carlo;
  e.draws = 10000;
  e.ci_half_width = 0.05;
  e.confidence = 0.95;
  e.seed = 7;
  doc.estimates.push_back({"phi_o_F", e});
  doc.extras = Json{{"summary", {{"count", 3}}}};
  doc.errors.push_back({"BudgetExceeded", "too big"});
  doc.overall_verdict = "holds";
  return doc;
}

}  // namespace

TEST_CASE("json round trip") {
  const ReportDocument doc = sample_document();
  const std::string text = emit(doc, OutputFormat::json);
  CHECK(text.rfind("{\n  \"schema_version\": 1", 0) == 0);
  const ReportDocument back = parse_document(text);
  CHECK(back == doc);
  CHECK(emit(back, OutputFormat::json) == text);
  CHECK(std::isinf(back.reports[0].rhs));
}

TEST_CASE("empty document") {
  ReportDocument doc;
  doc.command = "suite";
  const std::string text = emit(doc, OutputFormat::json);
  CHECK(parse_document(text) == doc);
  CHECK(count_lines(emit(doc, OutputFormat::csv)) == 1);
}

TEST_CASE("csv rows") {
  ReportDocument doc = sample_document();
  doc.reports.clear();
  const std::string csv = emit(doc, OutputFormat::csv);
  CHECK(count_lines(csv) == 2);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header ==
        "kind,label,inequality_id,lhs,rhs,ratio,verdict,method,value,draws,ci_half_width,"
        "confidence,seed,runtime_ms");
  CHECK(row == "estimate,phi_o_F,,,,,,monte_carlo,0.7071067811865476,10000,0.05,0.95,7,0");

  const std::string full = emit(sample_document(), OutputFormat::csv);
  CHECK(count_lines(full) == 3);
  CHECK(full.find("report,,lemma3_fat,0.30000000000000004,inf,") != std::string::npos);
}

TEST_CASE("volatile fields") {
  ReportDocument doc = sample_document();
  strip_volatile(doc);
  CHECK_FALSE(doc.timestamp);
  CHECK(doc.reports[0].runtime_ms == 0.0);
  CHECK(emit(doc, OutputFormat::json).find("timestamp") == std::string::npos);
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(parse_document("{"), Error);
  CHECK_THROWS_AS(parse_document("{\"schema_version\": 99}"), Error);
  std::string text = emit(sample_document(), OutputFormat::json);
  const auto at = text.find("lemma3_fat");
  text.replace(at, 10, "lemma9_fat");
  CHECK_THROWS_AS(parse_document(text), Error);
}

TEST_CASE("class, sample and map serialization") {
  BuiltinSpec b;
  b.num_functions = 3;
  b.domain_size = 2;
  b.output_dim = 2;
  b.seed = 5;
  const FunctionClass cls = make_builtin_class(b);
  CHECK(function_class_from_json(to_json(cls)) == cls);
  CHECK(function_class_from_json(Json::parse(to_json(cls).dump())) == cls);

  const Json builtin = {{"builtin", {{"family", "random_table"}, {"num_functions", 3},
                                     {"domain_size", 2}, {"output_dim", 2}, {"seed", 5}}}};
  CHECK(function_class_from_json(builtin) == cls);

  const FunctionClass scalar = function_class_from_json(Json::parse(R"({"values": [[1, -1], [0.5, 2]]})"));
  CHECK(scalar.output_dim() == 1);
  CHECK(scalar(1, 1, 0) == 2.0);
  CHECK_THROWS_AS(function_class_from_json(Json::parse(R"({"values": [[1, -1], [0.5]]})")), Error);

  const Sample s({2, 0, 1});
  CHECK(sample_from_json(to_json(s)) == s);
  CHECK(sample_from_json(Json::parse("[2, 0, 1]")) == s);

  LipschitzSeq phi;
  phi.maps = {LipschitzMap::max(), LipschitzMap::softmax(0.5).rescaled(2.0, 0.25),
              LipschitzMap::affine({1.0, -2.0}, 0.5),
              LipschitzMap::max_affine({{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, -1.0}}),
              LipschitzMap::projection(1), LipschitzMap::neg_min()};
  phi.declared_lipschitz = 3.0;
  phi.declared_output_bound = 2.0;
  const Json pj = to_json(phi);
  CHECK(pj["norm_p"] == "inf");
  CHECK(lipschitz_seq_from_json(Json::parse(pj.dump())) == phi);

  const LipschitzSeq broadcast =
      lipschitz_seq_from_json(Json::parse(R"({"map": {"family": "max"}, "n": 3, "norm_p": 2})"));
  CHECK(broadcast.size() == 3);
  CHECK(broadcast.norm_p == 2.0);
  CHECK(broadcast.declared_lipschitz == 1.0);
  CHECK_THROWS_AS(lipschitz_seq_from_json(pj, 4), Error);
}
