#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vcontract/cli.hpp"
#include "vcontract/report.hpp"

using namespace vcontract;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string write_config(const std::string& name, const Json& j) {
  const auto path = std::filesystem::temp_directory_path() / ("vcontract_test_" + name + ".json");
  std::ofstream(path) << j.dump();
  return path.string();
}

Json pm_class() { return Json::parse(R"({"values": [[[1.0]], [[-1.0]]]})"); }

}  // namespace

TEST_CASE("prop1 document") {
  const Run r = run({"prop1", "--K", "4", "--n", "16", "--no-timestamp"});
  CHECK(r.status == kExitOk);
  const ReportDocument doc = parse_document(r.out);
  REQUIRE(doc.reports.size() == 1);
  CHECK(doc.reports[0].lhs == 3.0);
  CHECK(doc.reports[0].verdict == Verdict::holds);
  CHECK(doc.overall_verdict == "holds");
  CHECK_FALSE(doc.timestamp);
}

TEST_CASE("timestamps are present unless suppressed") {
  const Run r = run({"prop1", "--K", "1", "--n", "2"});
  CHECK(parse_document(r.out).timestamp);
}

TEST_CASE("mis-declared Lipschitz constant is a usage error") {
  const Json cfg = {{"class", Json::parse(R"({"values": [[[1.0, 0.0]], [[-1.0, 0.5]]]})")},
                    {"sample", {0, 0}},
                    {"phi", {{"map", {{"family", "affine"}, {"weights", {2.0, 0.0}}, {"bias", 0.0}}},
                             {"declared_lipschitz", 1.0}}}};
  const Run r = run({"check", "eq3_maurer", "--config", write_config("misdeclared", cfg), "--no-timestamp"});
  CHECK(r.status == kExitUsage);
  const ReportDocument doc = parse_document(r.out);
  REQUIRE(doc.errors.size() == 1);
  CHECK(doc.errors[0].kind == "CertificationFailed");
  CHECK(doc.extras["lipschitz_certificate"]["counterexample"]["u"] == Json::array({1.0, 0.0}));
}

TEST_CASE("exit statuses") {
  CHECK(run({"frobnicate"}).status == kExitUsage);
  CHECK(run({"check", "nope", "--no-timestamp"}).status == kExitUsage);
  CHECK(run({"prop1", "--K", "3", "--n", "4", "--no-timestamp"}).status == kExitUsage);
  CHECK(run({"prop1", "--config", "/nonexistent/config.json"}).status == kExitUsage);

  const Run budget = run({"prop1", "--K", "4", "--n", "16", "--exact-cap", "12", "--no-timestamp"});
  CHECK(budget.status == kExitBudget);
  CHECK(parse_document(budget.out).errors.at(0).kind == "BudgetExceeded");

  const double e = std::exp(1.0);
  const Json step = {{"a", e}, {"b", e}, {"delta", 0.0}, {"grid_points", 10}};
  CHECK(run({"check", "step_iii_monotone", "--config", write_config("step", step), "--no-timestamp"}).status ==
        kExitOk);
  const Json below = {{"a", 0.5}, {"b", 1.0}};
  CHECK(run({"check", "step_iii_monotone", "--config", write_config("below", below), "--no-timestamp"})
            .status == kExitUsage);
}

TEST_CASE("an understated cover profile is a certified violation") {
  const Json cfg = {{"profile", {{"breakpoints", {0.0}}, {"log_sizes", {0.0}}}}, {"n", 4}, {"lhs", 1.0}};
  const Run r = run({"dudley", "--config", write_config("understated", cfg), "--no-timestamp"});
  CHECK(r.status == kExitViolation);
  const ReportDocument doc = parse_document(r.out);
  CHECK(doc.overall_verdict == "violated");
  CHECK(doc.reports.at(0).verdict == Verdict::violated);

  const Json honest = {{"profile", {{"breakpoints", {0.0, 0.5}}, {"log_sizes", {std::log(2.0), 0.0}}}},
                       {"n", 4}, {"lhs", 1.0}};
  const Run h = run({"dudley", "--config", write_config("honest", honest), "--no-timestamp"});
  CHECK(h.status == kExitOk);
  CHECK(parse_document(h.out).reports.at(0).rhs == doctest::Approx(8.0));
}

TEST_CASE("rademacher and worstcase commands") {
  const Json cfg = {{"class", pm_class()}, {"sample", {0, 0}}};
  const Run r = run({"rademacher", "--config", write_config("rad", cfg), "--no-timestamp"});
  CHECK(r.status == kExitOk);
  const ReportDocument doc = parse_document(r.out);
  REQUIRE(doc.estimates.size() == 1);
  CHECK(doc.estimates[0].estimate.value == 1.0);
  CHECK(doc.estimates[0].estimate.method == EstimateMethod::exact);

  const Run mc = run({"rademacher", "--config", write_config("rad", cfg), "--exact-cap", "1",
                      "--mc-draws", "500", "--seed", "3", "--no-timestamp", "--format", "csv"});
  CHECK(mc.status == kExitOk);
  CHECK(mc.out.find("estimate,F|_0,,,,,,monte_carlo,") != std::string::npos);

  const Json sp = {{"class", {{"builtin", {{"family", "sign_product"}, {"output_dim", 3}}}}}};
  const Run w = run({"worstcase", "--config", write_config("wc", sp), "--coordinate", "1", "--n", "6",
                     "--no-timestamp"});
  CHECK(w.status == kExitOk);
  const ReportDocument wd = parse_document(w.out);
  CHECK(wd.extras["worst_case"]["value"] == 1.875);
  CHECK(wd.extras["worst_case"]["argmax_multiset"] == Json::array({1, 1, 1, 1, 1, 1}));
}

TEST_CASE("cover, fat and dudley commands") {
  const Json cfg = {{"class", pm_class()}, {"sample", {0, 0, 0}}};
  const std::string path = write_config("geom", cfg);
  const Run c = run({"cover", "--config", path, "--eps", "0.5", "--norm", "linf", "--no-timestamp"});
  CHECK(c.status == kExitOk);
  CHECK(parse_document(c.out).extras["cover"]["size"] == 2);
  const Run f = run({"fat", "--config", path, "--gamma", "2", "--no-timestamp"});
  CHECK(parse_document(f.out).extras["fat"]["dimension"] == 1);
  const Run d = run({"dudley", "--config", path, "--no-timestamp"});
  CHECK(d.status == kExitOk);
  CHECK(parse_document(d.out).reports.at(0).verdict == Verdict::holds);
  CHECK(run({"cover", "--config", path, "--no-timestamp"}).status == kExitUsage);
}

TEST_CASE("check commands on a small instance") {
  const Json cfg = {{"class", Json::parse(R"({"values": [[[0.5, -0.25], [1.0, 0.0]],
                                                          [[-0.5, 0.75], [0.2, 0.3]],
                                                          [[0.1, 0.1], [-1.0, 0.5]]]})")},
                    {"sample", {0, 1, 1, 0}},
                    {"phi", {{"map", {{"family", "max"}}}}},
                    {"eps", 0.3},
                    {"eps_grid", {0.2, 0.5, 1.0}}};
  const std::string path = write_config("checks", cfg);
  for (const char* id : {"eq3_maurer", "lemma1_cover", "lemma3_fat", "lemma2_diag", "dudley",
                         "thm1_ratio", "thm3_ratio"}) {
    const Run r = run({"check", id, "--config", path, "--no-timestamp"});
    CHECK_MESSAGE(r.status == kExitOk, id, " ", r.err);
    CHECK(parse_document(r.out).reports.size() == 1);
  }
  const Run p = run({"check", "lemma1_cover", "--config", path, "--p", "2", "--no-timestamp"});
  CHECK(parse_document(p.out).reports.at(0).get("p") == 2.0);
}

TEST_CASE("suite documents are reproducible") {
  const auto a = run({"suite", "--instances", "20", "--seed", "9", "--no-timestamp", "--threads", "1"});
  const auto b = run({"suite", "--instances", "20", "--seed", "9", "--no-timestamp", "--threads", "8"});
  CHECK(a.status == kExitOk);
  CHECK(a.out == b.out);
  const ReportDocument doc = parse_document(a.out);
  CHECK(doc.extras["summary"]["certified_violations"] == 0);
  CHECK(doc.extras["cases"].size() == 20);
}

TEST_CASE("budgets from the environment") {
  setenv("VCONTRACT_EXACT_CAP", "12", 1);
  const Run r = run({"prop1", "--K", "4", "--n", "16", "--no-timestamp"});
  unsetenv("VCONTRACT_EXACT_CAP");
  CHECK(r.status == kExitBudget);
  const Run flag = run({"prop1", "--K", "4", "--n", "16", "--exact-cap", "20", "--no-timestamp"});
  CHECK(flag.status == kExitOk);
}
