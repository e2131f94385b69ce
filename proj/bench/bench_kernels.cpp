// Serial vs OpenMP sign-sum kernels on random tables.

#include <benchmark/benchmark.h>

#include "vcontract/kernels.hpp"
#include "vcontract/rng.hpp"

using namespace vcontract;
using namespace vcontract::kernels;

namespace {

ScalarTable random_table(std::size_t rows, std::size_t cols) {
  Xorshift64Star rng(99);
  ScalarTable a(rows, cols);
  for (std::size_t m = 0; m < rows; ++m)
    for (std::size_t t = 0; t < cols; ++t) a(m, t) = rng.uniform(-1.0, 1.0);
  return a;
}

void BM_exact_serial(benchmark::State& state) {
  const ScalarTable a = random_table(16, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial_exact_sup_mean(a));
}

void BM_exact_omp(benchmark::State& state) {
  const ScalarTable a = random_table(16, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(omp_exact_sup_mean(a));
}

void BM_mc_serial(benchmark::State& state) {
  const ScalarTable a = random_table(16, 40);
  for (auto _ : state)
    benchmark::DoNotOptimize(serial_mc_sup_sum(a, static_cast<std::uint64_t>(state.range(0)), 7));
}

void BM_mc_omp(benchmark::State& state) {
  const ScalarTable a = random_table(16, 40);
  for (auto _ : state)
    benchmark::DoNotOptimize(omp_mc_sup_sum(a, static_cast<std::uint64_t>(state.range(0)), 7));
}

}  // namespace

BENCHMARK(BM_exact_serial)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_exact_omp)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_mc_serial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_omp)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
