#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "vcontract/error.hpp"
#include "vcontract/kernels.hpp"
#include "vcontract/rng.hpp"
#include "detail.hpp"

namespace vcontract::kernels {

double pairwise_sum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

double serial_exact_sup_mean(const ScalarTable& a) {
  const std::size_t M = a.rows();
  const std::size_t n = a.cols();
  if (M == 0) fail(ErrorKind::InvalidSpec, "empty class");
  if (n > kMaxExactLength) fail(ErrorKind::BudgetExceeded, "sample too long to enumerate");
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t block = std::min<std::uint64_t>(total, kLeafBlock);

  std::vector<double> block_sums(total / block, 0.0);
  for (std::uint64_t b = 0; b < block_sums.size(); ++b) {
    double acc = 0.0;
    for (std::uint64_t e = b * block; e < (b + 1) * block; ++e) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < M; ++m) {
        double s = 0.0;
        for (std::size_t t = 0; t < n; ++t)
          s += ((e >> (n - 1 - t)) & 1U) ? a(m, t) : -a(m, t);
        best = std::max(best, s);
      }
      acc += best;
    }
    block_sums[b] = acc;
  }
  return std::ldexp(pairwise_sum(block_sums), -static_cast<int>(n));
}

namespace {

double draw_sup(const ScalarTable& a, Xorshift64Star& rng, std::vector<std::uint64_t>& words) {
  const std::size_t n = a.cols();
  for (auto& w : words) w = rng.next();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < a.rows(); ++m) {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t)
      s += ((words[t / 64] >> (t % 64)) & 1U) ? a(m, t) : -a(m, t);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

double mc_block_sum(const ScalarTable& a, std::uint64_t draws, std::uint64_t seed,
                    std::uint64_t block) {
  Xorshift64Star rng(derive_seed(seed, block));
  std::vector<std::uint64_t> words((a.cols() + 63) / 64);
  const std::uint64_t begin = block * kDrawBlock;
  const std::uint64_t end = std::min<std::uint64_t>(draws, begin + kDrawBlock);
  double acc = 0.0;
  for (std::uint64_t d = begin; d < end; ++d) acc += draw_sup(a, rng, words);
  return acc;
}

double serial_mc_sup_sum(const ScalarTable& a, std::uint64_t draws, std::uint64_t seed) {
  if (a.rows() == 0) fail(ErrorKind::InvalidSpec, "empty class");
  const std::uint64_t blocks = (draws + kDrawBlock - 1) / kDrawBlock;
  std::vector<double> sums(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) sums[b] = mc_block_sum(a, draws, seed, b);
  return pairwise_sum(sums);
}

double multiset_sup_mean(const ScalarTable& a, std::span<const std::size_t> counts) {
  const std::size_t M = a.rows();
  const std::size_t J = a.cols();
  if (counts.size() != J) fail(ErrorKind::ArityMismatch, "one count per column required");

  // weights[j][k] = C(c_j, k) / 2^{c_j}; S_j = 2k - c_j.
  std::vector<std::vector<double>> weights(J);
  for (std::size_t j = 0; j < J; ++j) {
    const std::size_t c = counts[j];
    weights[j].assign(c + 1, 0.0);
    double binom = 1.0;
    for (std::size_t k = 0; k <= c; ++k) {
      weights[j][k] = std::ldexp(binom, -static_cast<int>(c));
      binom = binom * static_cast<double>(c - k) / static_cast<double>(k + 1);
    }
  }

  std::vector<std::size_t> digit(J, 0);
  double total = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t j = 0; j < J; ++j) w *= weights[j][digit[j]];
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < M; ++m) {
      double s = 0.0;
      for (std::size_t j = 0; j < J; ++j)
        s += (2.0 * static_cast<double>(digit[j]) - static_cast<double>(counts[j])) * a(m, j);
      best = std::max(best, s);
    }
    total += w * best;

    std::size_t j = J;
    while (j > 0) {
      --j;
      if (++digit[j] <= counts[j]) break;
      digit[j] = 0;
      if (j == 0) return total;
    }
    if (J == 0) return total;
  }
}

}  // namespace vcontract::kernels
