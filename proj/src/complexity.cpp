#include "vcontract/complexity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "vcontract/error.hpp"
#include "vcontract/kernels.hpp"
#include "vcontract/rng.hpp"

namespace vcontract {

ScalarTable canonical_table(const ScalarTable& a) {
  const std::size_t M = a.rows();
  const std::size_t n = a.cols();

  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  std::stable_sort(cols.begin(), cols.end(), [&](std::size_t x, std::size_t y) {
    for (std::size_t m = 0; m < M; ++m)
      if (a(m, x) != a(m, y)) return a(m, x) < a(m, y);
    return false;
  });

  std::vector<std::vector<double>> rows(M, std::vector<double>(n));
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t j = 0; j < n; ++j) rows[m][j] = a(m, cols[j]);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  std::vector<double> data;
  data.reserve(rows.size() * n);
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return ScalarTable(rows.size(), n, std::move(data));
}

double exact_rademacher(const ScalarTable& a, std::size_t exact_cap) {
  if (a.rows() == 0) fail(ErrorKind::InvalidSpec, "class must contain a function");
  if (a.cols() > exact_cap || a.cols() > kernels::kMaxExactLength)
    fail(ErrorKind::BudgetExceeded, "exact enumeration of length " + std::to_string(a.cols()) +
                                        " exceeds exact_cap " + std::to_string(exact_cap));
  const ScalarTable c = canonical_table(a);
  if (c.rows() == 1) return 0.0;
  return kernels::omp_exact_sup_mean(c);
}

RademacherEstimate mc_rademacher(const ScalarTable& a, std::uint64_t draws, double confidence,
                                 std::uint64_t seed) {
  if (draws == 0) fail(ErrorKind::InvalidSpec, "Monte Carlo needs at least one draw");
  if (!(confidence > 0.0 && confidence < 1.0))
    fail(ErrorKind::InvalidSpec, "confidence must lie in (0, 1)");
  const auto start = std::chrono::steady_clock::now();
  RademacherEstimate est;
  est.method = EstimateMethod::monte_carlo;
  est.draws = draws;
  est.confidence = confidence;
  est.seed = seed;
  est.value = kernels::omp_mc_sup_sum(a, draws, seed) / static_cast<double>(draws);
  const double range = 2.0 * static_cast<double>(a.cols()) * a.max_abs();
  est.ci_half_width =
      range * std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(draws)));
  est.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return est;
}

RademacherEstimate rademacher_estimate(const ScalarTable& a, std::size_t exact_cap,
                                       std::uint64_t draws, double confidence,
                                       std::uint64_t seed) {
  if (a.cols() > exact_cap) return mc_rademacher(a, draws, confidence, seed);
  const auto start = std::chrono::steady_clock::now();
  RademacherEstimate est;
  est.value = exact_rademacher(a, exact_cap);
  est.seed = seed;
  est.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return est;
}

double exact_multi_rademacher(const EvaluatedClass& ec, std::size_t exact_cap) {
  const std::size_t width = ec.length() * ec.output_dim();
  if (width > exact_cap)
    fail(ErrorKind::BudgetExceeded, "n*K = " + std::to_string(width) + " exceeds exact_cap " +
                                        std::to_string(exact_cap));
  return exact_rademacher(ec.flattened(), exact_cap);
}

double multiset_rademacher(const ScalarClass& sc, const std::vector<std::size_t>& counts) {
  if (counts.size() != sc.domain().size)
    fail(ErrorKind::ArityMismatch, "one count per domain point required");
  // Drop points with zero multiplicity; they contribute nothing.
  std::vector<std::size_t> support;
  std::vector<std::size_t> used;
  for (std::size_t x = 0; x < counts.size(); ++x)
    if (counts[x] > 0) {
      support.push_back(x);
      used.push_back(counts[x]);
    }
  if (support.empty()) return 0.0;
  ScalarTable a(sc.num_functions(), support.size());
  for (std::size_t m = 0; m < sc.num_functions(); ++m)
    for (std::size_t j = 0; j < support.size(); ++j) a(m, j) = sc(m, support[j]);
  return kernels::multiset_sup_mean(a, used);
}

std::uint64_t binomial_saturating(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= b; ++i) {
    r = r * (a - b + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

Sample sample_of(const std::vector<std::size_t>& multiset) { return Sample(multiset); }

std::vector<std::size_t> counts_of(const std::vector<std::size_t>& multiset, std::size_t size) {
  std::vector<std::size_t> counts(size, 0);
  for (std::size_t x : multiset) ++counts[x];
  return counts;
}

WorstCaseResult local_search(const ScalarClass& sc, std::size_t n, std::uint64_t seed) {
  const std::size_t X = sc.domain().size;
  constexpr int kRestarts = 8;
  Xorshift64Star rng(seed);

  WorstCaseResult best;
  best.method = SearchMethod::local_search;
  best.value = -std::numeric_limits<double>::infinity();

  for (int r = 0; r < kRestarts; ++r) {
    std::vector<std::size_t> counts(X, 0);
    if (r == 0) {
      counts[0] = n;
    } else {
      for (std::size_t t = 0; t < n; ++t) ++counts[rng.below(X)];
    }
    double value = multiset_rademacher(sc, counts);
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t from = 0; from < X && !improved; ++from) {
        if (counts[from] == 0) continue;
        for (std::size_t to = 0; to < X && !improved; ++to) {
          if (to == from) continue;
          --counts[from];
          ++counts[to];
          const double v = multiset_rademacher(sc, counts);
          if (v > value + 1e-12) {
            value = v;
            improved = true;
          } else {
            ++counts[from];
            --counts[to];
          }
        }
      }
    }
    if (value > best.value) {
      best.value = value;
      best.argmax_multiset.clear();
      for (std::size_t x = 0; x < X; ++x) best.argmax_multiset.insert(best.argmax_multiset.end(), counts[x], x);
    }
  }
  return best;
}

}  // namespace

WorstCaseResult worst_case_rademacher(const ScalarClass& sc, std::size_t n, const Budgets& budgets,
                                      std::uint64_t seed) {
  if (n == 0) fail(ErrorKind::InvalidSpec, "worst-case complexity needs n >= 1");
  if (n > budgets.exact_cap)
    fail(ErrorKind::BudgetExceeded, "n = " + std::to_string(n) + " exceeds exact_cap " +
                                        std::to_string(budgets.exact_cap));
  const std::size_t X = sc.domain().size;
  const std::uint64_t count = binomial_saturating(X + n - 1, n);

  WorstCaseResult result;
  if (count <= budgets.multiset_budget) {
    result.method = SearchMethod::exhaustive;
    result.is_certified_max = true;
    // Nondecreasing index sequences in lexicographic order. Ties within
    // 1e-12 go to the multiset with fewer distinct points, then to the
    // first one seen.
    std::vector<std::size_t> ms(n, 0);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_distinct = 0;
    for (;;) {
      const double v = multiset_rademacher(sc, counts_of(ms, X));
      std::size_t distinct = 1;
      for (std::size_t j = 1; j < n; ++j) distinct += ms[j] != ms[j - 1];
      if (v > best + 1e-12 || (v >= best - 1e-12 && distinct < best_distinct)) {
        best = std::max(best, v);
        best_distinct = distinct;
        result.argmax_multiset = ms;
      }
      std::size_t i = n;
      while (i > 0 && ms[i - 1] == X - 1) --i;
      if (i == 0) break;
      const std::size_t next = ms[i - 1] + 1;
      for (std::size_t j = i - 1; j < n; ++j) ms[j] = next;
    }
  } else {
    result = local_search(sc, n, seed);
  }
  result.value = exact_rademacher(sc.evaluate(sample_of(result.argmax_multiset)), budgets.exact_cap);
  return result;
}

}  // namespace vcontract
