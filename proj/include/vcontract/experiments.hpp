#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vcontract/bounds.hpp"

namespace vcontract {

/// The lower-bound construction: basis-vector domain, sign-product class,
/// phi = max of coordinates, and the block sample (n/K copies of e_1, then
/// e_2, ...).
struct Prop1Instance {
  std::size_t dimension = 1;
  std::size_t n = 1;
  std::size_t block_size = 1;
  FunctionClass cls;
  LipschitzSeq phi;
  Sample sample;

  Instance instance() const { return Instance::make(cls, sample, phi); }
};

Prop1Instance prop1_instance(std::size_t dimension, std::size_t n,
                             const Budgets& budgets = {});

/// E |sum_{t<=m} eps_t|. Exact by sign enumeration up to exact_cap, by the
/// binomial distribution of the sum above it.
double abs_sum_expectation(std::size_t m, std::size_t exact_cap = Budgets{}.exact_cap);

/// m 2^{1-m} C(m-1, floor((m-1)/2)).
double abs_sum_closed_form(std::size_t m);

struct Prop1Verification {
  BoundReport report;      // lhs = R(phi o F; x), rhs = 8^{-1/2} K max_i R(F|_i; x)
  bool identities_agree = true;  // engine vs closed form, 1e-9
  bool all_hold = true;
};

/// Every quantity of the construction computed by the general engine and by
/// its closed form, plus the four inequalities: the lower bound, the
/// per-coordinate sqrt(n/K) bound, the sqrt(2) K upper tradeoff, and
/// R_n(F|_i) >= sqrt(n/2).
Prop1Verification prop1_verify(std::size_t dimension, std::size_t n, const Budgets& budgets = {});

struct SuiteSpec {
  std::size_t instances = 200;
  std::size_t max_n = 10;
  std::size_t max_dimension = 3;
  std::size_t max_functions = 16;
  std::size_t max_domain = 4;
  double delta = 0.5;
  double lp = 2.0;
  double rv_C = 1.0;
  double rv_c = 0.5;
  std::vector<double> lemma1_scales{0.1, 0.25, 0.5, 1.0};
  std::vector<double> rv_scales{0.25, 0.5, 0.75};
  Budgets budgets;
};

/// One generated instance and everything checked on it.
struct SuiteCase {
  std::size_t index = 0;
  std::string family;
  std::size_t n = 0, dimension = 0, functions = 0, domain = 0;
  std::vector<BoundReport> reports;
};

struct InequalityStats {
  std::size_t count = 0;
  std::size_t holds = 0;
  std::size_t violated = 0;
  std::size_t diagnostic = 0;
  double max_ratio = 0.0;
  bool all_finite = true;

  bool operator==(const InequalityStats&) const = default;
};

struct SuiteSummary {
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::map<std::string, InequalityStats> by_inequality;  // keyed by id name
  double max_fitted_rv_constant = 0.0;
  double max_thm1_ratio = 0.0;
  double max_thm3_ratio = 0.0;
  std::size_t certified_violations = 0;

  bool operator==(const SuiteSummary&) const = default;
};

struct SuiteResult {
  std::vector<SuiteCase> cases;
  SuiteSummary summary;
};

/// Generates spec.instances instances; instance i draws everything from
/// Xorshift64Star(derive_seed(seed, i)), so the stream does not depend on
/// how instances are scheduled. Instances run in parallel and are merged in
/// index order.
SuiteResult fuzz_suite(const SuiteSpec& spec, std::uint64_t seed);

/// The generated instance number `index` (exposed for tests).
struct GeneratedInstance {
  std::string family;
  Instance instance;
  Instance scalar;  // K = 1 instance for the scalar contraction check
};
GeneratedInstance generate_instance(const SuiteSpec& spec, std::uint64_t seed, std::size_t index);

SuiteSummary summarize(std::uint64_t seed, const std::vector<SuiteCase>& cases);

}  // namespace vcontract
