#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "vcontract/error.hpp"
#include "vcontract/experiments.hpp"
#include "oracles.hpp"

using namespace vcontract;

TEST_CASE("lower-bound construction") {
  const Prop1Instance one = prop1_instance(1, 2);
  CHECK(one.cls.num_functions() == 2);
  CHECK(one.cls.domain().size == 1);
  CHECK(one.sample.points() == std::vector<std::size_t>{0, 0});

  const Prop1Instance two = prop1_instance(2, 4);
  CHECK(two.cls.num_functions() == 4);
  CHECK(two.sample.points() == std::vector<std::size_t>{0, 0, 1, 1});

  try {
    prop1_instance(3, 4);
    FAIL("expected InvalidBlocking");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidBlocking);
  }
  CHECK_THROWS_AS(prop1_instance(4, 20), Error);
}

TEST_CASE("absolute sign sums") {
  CHECK(abs_sum_expectation(1) == 1.0);
  CHECK(abs_sum_expectation(4) == 1.5);
  CHECK(abs_sum_expectation(6) == 1.875);
  double prev = 0.0;
  for (std::size_t m = 1; m <= 20; ++m) {
    const double v = abs_sum_expectation(m);
    CHECK(close_tol(v, oracle::abs_sum(m)));
    CHECK(close_tol(v, abs_sum_closed_form(m)));
    CHECK(std::sqrt(m / 2.0) <= v + 1e-12);
    CHECK(v <= std::sqrt(static_cast<double>(m)) + 1e-12);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(close_tol(abs_sum_expectation(25), oracle::abs_sum(25)));
}

TEST_CASE("lower bound for K = 4, n = 16") {
  const Prop1Verification v = prop1_verify(4, 16);
  const BoundReport& r = v.report;
  CHECK(r.lhs == 3.0);
  CHECK(r.get("max_coord_rademacher") == 1.5);
  CHECK(r.rhs == doctest::Approx(4.0 * 1.5 / std::sqrt(8.0)).epsilon(1e-15));
  CHECK(r.get("rhs_tradeoff") == doctest::Approx(std::sqrt(2.0) * 6.0).epsilon(1e-15));
  CHECK(r.get("per_coordinate_cap") == 2.0);
  CHECK(*r.get("worst_case_min_over_coords") >= std::sqrt(8.0));
  CHECK(v.identities_agree);
  CHECK(v.all_hold);
  CHECK(r.verdict == Verdict::holds);
}

TEST_CASE("lower bound for K = 1, n = 2") {
  const Prop1Verification v = prop1_verify(1, 2);
  CHECK(v.report.lhs == 1.0);
  CHECK(v.report.rhs == doctest::Approx(1.0 / std::sqrt(8.0)));
  CHECK(v.all_hold);
}

TEST_CASE("engine and closed forms agree over the envelope") {
  for (std::size_t K = 1; K <= 4; ++K)
    for (std::size_t n = K; n <= 16; n += K) {
      const Prop1Verification v = prop1_verify(K, n);
      CHECK_MESSAGE(v.identities_agree, "K=", K, " n=", n);
      CHECK(leq_tol(v.report.rhs, v.report.lhs));
      CHECK(v.all_hold);
    }
}

TEST_CASE("generated instances are reproducible") {
  SuiteSpec spec;
  const auto a = generate_instance(spec, 3, 17);
  const auto b = generate_instance(spec, 3, 17);
  CHECK(a.family == b.family);
  CHECK(a.instance.cls == b.instance.cls);
  CHECK(a.instance.sample == b.instance.sample);
  CHECK(a.instance.phi == b.instance.phi);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto g = generate_instance(spec, 3, i);
    CHECK(g.instance.dimension() <= spec.max_dimension);
    CHECK(g.instance.n() <= spec.max_n);
    CHECK(g.instance.n() * g.instance.dimension() <= spec.budgets.exact_cap);
    CHECK(g.instance.cls.num_functions() <= spec.max_functions);
    CHECK(g.scalar.dimension() == 1);
  }
}

TEST_CASE("suite finds no certified violations and is deterministic") {
  SuiteSpec spec;
  spec.instances = 60;
  omp_set_num_threads(1);
  const SuiteResult a = fuzz_suite(spec, 21);
  omp_set_num_threads(8);
  const SuiteResult b = fuzz_suite(spec, 21);
  CHECK(a.summary == b.summary);
  REQUIRE(a.cases.size() == b.cases.size());
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    REQUIRE(a.cases[i].reports.size() == b.cases[i].reports.size());
    for (std::size_t j = 0; j < a.cases[i].reports.size(); ++j) {
      BoundReport x = a.cases[i].reports[j], y = b.cases[i].reports[j];
      x.runtime_ms = y.runtime_ms = 0.0;
      CHECK(x == y);
    }
  }
  CHECK(a.summary.certified_violations == 0);
  for (const char* id : {"eq2_scalar", "eq3_maurer", "lemma1_cover", "lemma3_fat", "dudley"}) {
    const auto& st = a.summary.by_inequality.at(id);
    CHECK(st.violated == 0);
    CHECK(st.diagnostic == 0);
    CHECK(st.holds == st.count);
  }
  CHECK(a.summary.by_inequality.at("eq3_maurer").max_ratio <= std::sqrt(2.0) + 1e-9);
  CHECK(std::isfinite(a.summary.max_fitted_rv_constant));
  CHECK(std::isfinite(a.summary.max_thm1_ratio));
  CHECK(std::isfinite(a.summary.max_thm3_ratio));
}
