#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "cubeinf/bitstream.hpp"
#include "cubeinf/kernels.hpp"

namespace {

using namespace cubeinf;

std::vector<double> random_values(int n) {
  std::vector<double> v(std::size_t{1} << n);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = uniform_at(42, i + 1) - 0.5;
  return v;
}

std::vector<std::int8_t> random_table(int n) {
  std::vector<std::int8_t> t(std::size_t{1} << n);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<std::int8_t>(fair_bit_at(7, i + 1));
  return t;
}

void BM_FwhtSerial(benchmark::State& state) {
  const auto base = random_values(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto v = base;
    kernels::serial::fwht(v);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_FwhtOmp(benchmark::State& state) {
  const auto base = random_values(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto v = base;
    kernels::omp::fwht(v);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_PivotalSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto t = random_table(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::pivotal_counts(t, n));
}

void BM_PivotalOmp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto t = random_table(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::pivotal_counts(t, n));
}

// A sample whose cost resembles a short query-algorithm run.
double sample_work(std::size_t s) {
  LazyInput omega(derive_seed(11, s, 0));
  double acc = 0.0;
  for (Position i = 1; i <= 256; ++i) acc += omega.bit(i);
  return acc;
}

void BM_MapSerial(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::map_samples<double>(count, sample_work));
}

void BM_MapOmp(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::map_samples<double>(count, sample_work));
}

}  // namespace

BENCHMARK(BM_FwhtSerial)->DenseRange(12, 20, 4);
BENCHMARK(BM_FwhtOmp)->DenseRange(12, 20, 4);
BENCHMARK(BM_PivotalSerial)->DenseRange(12, 20, 4);
BENCHMARK(BM_PivotalOmp)->DenseRange(12, 20, 4);
BENCHMARK(BM_MapSerial)->Arg(1 << 12)->Arg(1 << 15);
BENCHMARK(BM_MapOmp)->Arg(1 << 12)->Arg(1 << 15);

BENCHMARK_MAIN();
