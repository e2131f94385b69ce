#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "detail.hpp"
#include "vcontract/error.hpp"
#include "vcontract/kernels.hpp"

namespace vcontract::kernels {

namespace {

// table[p * M + m] = sum over the `width` columns starting at `first` of
// eps_t a(m, t), with the signs read MSB-first from p.
std::vector<double> partial_sums(const ScalarTable& a, std::size_t first, std::size_t width) {
  const std::size_t M = a.rows();
  const std::size_t patterns = std::size_t{1} << width;
  std::vector<double> table(patterns * M);
  for (std::size_t p = 0; p < patterns; ++p)
    for (std::size_t m = 0; m < M; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < width; ++i) {
        const double v = a(m, first + i);
        s += ((p >> (width - 1 - i)) & 1U) ? v : -v;
      }
      table[p * M + m] = s;
    }
  return table;
}

}  // namespace

double omp_exact_sup_mean(const ScalarTable& a) {
  const std::size_t M = a.rows();
  const std::size_t n = a.cols();
  if (M == 0) fail(ErrorKind::InvalidSpec, "empty class");
  if (n > kMaxExactLength) fail(ErrorKind::BudgetExceeded, "sample too long to enumerate");

  // Index e = hi * 2^low_width + lo; the high half holds the first columns.
  const std::size_t high_width = n / 2;
  const std::size_t low_width = n - high_width;
  const std::vector<double> high = partial_sums(a, 0, high_width);
  const std::vector<double> low = partial_sums(a, high_width, low_width);

  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t block = std::min<std::uint64_t>(total, kLeafBlock);
  const std::int64_t blocks = static_cast<std::int64_t>(total / block);
  const std::uint64_t low_mask = (std::uint64_t{1} << low_width) - 1;
  std::vector<double> block_sums(static_cast<std::size_t>(blocks));

#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    double acc = 0.0;
    const std::uint64_t begin = static_cast<std::uint64_t>(b) * block;
    for (std::uint64_t e = begin; e < begin + block; ++e) {
      const double* h = &high[(e >> low_width) * M];
      const double* l = &low[(e & low_mask) * M];
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < M; ++m) best = std::max(best, h[m] + l[m]);
      acc += best;
    }
    block_sums[static_cast<std::size_t>(b)] = acc;
  }
  return std::ldexp(pairwise_sum(block_sums), -static_cast<int>(n));
}

double omp_mc_sup_sum(const ScalarTable& a, std::uint64_t draws, std::uint64_t seed) {
  if (a.rows() == 0) fail(ErrorKind::InvalidSpec, "empty class");
  const std::int64_t blocks = static_cast<std::int64_t>((draws + kDrawBlock - 1) / kDrawBlock);
  std::vector<double> sums(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b)
    sums[static_cast<std::size_t>(b)] = mc_block_sum(a, draws, seed, static_cast<std::uint64_t>(b));
  return pairwise_sum(sums);
}

}  // namespace vcontract::kernels
