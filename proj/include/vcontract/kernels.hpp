#pragma once

// Sign-enumeration and Monte Carlo kernels behind the Rademacher estimators.
//
// Every kernel computes E_eps max_m sum_t eps_t a(m, t) for an M x n table a.
// Sign vectors are numbered lexicographically: index e has eps_t = +1 iff bit
// (n - 1 - t) of e is set. Per-sign values are summed sequentially inside
// fixed blocks of kLeafBlock consecutive indices, and block sums are combined
// by a balanced pairwise tree, so the result never depends on thread count.
//
// The serial_* versions are straightforward reference implementations kept
// for testing and benchmarking; the omp_* versions are what the library uses.

#include <cstddef>
#include <cstdint>
#include <span>

#include "vcontract/model.hpp"

namespace vcontract::kernels {

inline constexpr std::size_t kLeafBlock = 1024;
inline constexpr std::size_t kDrawBlock = 256;
inline constexpr std::size_t kMaxExactLength = 40;

/// Balanced pairwise sum: split [lo, hi) at lo + (hi - lo) / 2.
double pairwise_sum(std::span<const double> values);

/// Exact expectation over all 2^n sign vectors, naive O(2^n M n).
double serial_exact_sup_mean(const ScalarTable& a);

/// Same quantity; meet-in-the-middle partial sums, O(2^n M), parallel blocks.
double omp_exact_sup_mean(const ScalarTable& a);

/// Sum over `draws` random sign vectors of max_m sum_t eps_t a(m, t).
/// Draw d belongs to block d / kDrawBlock whose signs come from
/// Xorshift64Star(derive_seed(seed, block)); each draw consumes
/// ceil(n / 64) words and eps_t = +1 iff bit (t mod 64) of word t / 64 is set.
double serial_mc_sup_sum(const ScalarTable& a, std::uint64_t draws, std::uint64_t seed);
double omp_mc_sup_sum(const ScalarTable& a, std::uint64_t draws, std::uint64_t seed);

/// E max_m sum_j S_j a(m, j) where S_j is a sum of counts[j] independent
/// signs; the multiset form of the exact expectation. Enumerates the
/// prod (counts[j] + 1) outcomes with binomial weights.
double multiset_sup_mean(const ScalarTable& a, std::span<const std::size_t> counts);

}  // namespace vcontract::kernels
