#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vcontract/model.hpp"

namespace vcontract {

struct Budgets {
  std::size_t exact_cap = 20;            // max sign-vector length enumerated exactly
  std::size_t shatter_cap = 12;          // max sequence length in shatter_check
  std::size_t cover_exact_max = 24;      // max M for exact minimum covers
  std::uint64_t multiset_budget = 20000; // max multisets in exhaustive worst-case search
  std::uint64_t fat_budget = 100000;     // max subsets examined by fat_dim
  std::uint64_t product_budget = 1000000;// max cartesian-product cover size
};

enum class EstimateMethod { exact, monte_carlo };

struct RademacherEstimate {
  double value = 0.0;
  EstimateMethod method = EstimateMethod::exact;
  std::uint64_t draws = 0;
  double ci_half_width = 0.0;
  double confidence = 1.0;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;

  bool operator==(const RademacherEstimate&) const = default;
};

enum class SearchMethod { exhaustive, local_search };

struct WorstCaseResult {
  double value = 0.0;
  std::vector<std::size_t> argmax_multiset;  // sorted domain indices, length n
  SearchMethod method = SearchMethod::exhaustive;
  bool is_certified_max = false;
};

/// Sorts columns lexicographically and drops duplicate rows. The empirical
/// Rademacher complexity is invariant under both, so this canonical form
/// makes results bit-identical under any permutation of the sample.
ScalarTable canonical_table(const ScalarTable& a);

/// E_eps max_m sum_t eps_t a(m, t), unnormalized, exact over 2^n signs.
double exact_rademacher(const ScalarTable& a, std::size_t exact_cap = Budgets{}.exact_cap);

/// Monte Carlo estimate with a Hoeffding interval over the per-draw range
/// [-nB, nB], B = max |a|.
RademacherEstimate mc_rademacher(const ScalarTable& a, std::uint64_t draws, double confidence,
                                 std::uint64_t seed);

/// Exact if n <= exact_cap, otherwise Monte Carlo with the given draws.
RademacherEstimate rademacher_estimate(const ScalarTable& a, std::size_t exact_cap,
                                       std::uint64_t draws, double confidence,
                                       std::uint64_t seed);

/// E sup_f sum_t sum_k eps_{t,k} f_k(x_t), exact over 2^{nK} signs.
double exact_multi_rademacher(const EvaluatedClass& ec,
                              std::size_t exact_cap = Budgets{}.exact_cap);

/// Exact empirical complexity of a sample given as per-point counts.
double multiset_rademacher(const ScalarClass& sc, const std::vector<std::size_t>& counts);

/// max over length-n samples from the domain. Multisets are enumerated when
/// C(|X| + n - 1, n) <= multiset_budget; otherwise a seeded multi-restart
/// swap search returns a lower bound with is_certified_max = false.
WorstCaseResult worst_case_rademacher(const ScalarClass& sc, std::size_t n,
                                      const Budgets& budgets = {}, std::uint64_t seed = 0);

/// C(a, b) as a double-checked integer, saturating at UINT64_MAX.
std::uint64_t binomial_saturating(std::uint64_t a, std::uint64_t b);

}  // namespace vcontract
