#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp; both produce
// bit-identical results for the same input regardless of thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include <omp.h>

#include "cubeinf/montecarlo.hpp"

namespace cubeinf::kernels {

namespace serial {

/// Unnormalised Walsh-Hadamard butterfly, in place. size must be a power of 2.
void fwht(std::span<double> values);

/// counts[j] = #{x : table[x] != table[x ^ (1 << j)]} for j < n.
std::vector<std::uint64_t> pivotal_counts(std::span<const std::int8_t> table, int n);

template <class T, class F>
std::vector<T> map_samples(std::size_t count, F&& per_sample) {
  std::vector<T> out(count);
  for (std::size_t s = 0; s < count; ++s) out[s] = per_sample(s);
  return out;
}

}  // namespace serial

namespace omp {

void fwht(std::span<double> values);

std::vector<std::uint64_t> pivotal_counts(std::span<const std::int8_t> table, int n);

/// Results are stored by sample index, so reductions over the returned
/// vector do not depend on scheduling.
template <class T, class F>
std::vector<T> map_samples(std::size_t count, F&& per_sample) {
  std::vector<T> out(count);
  const int workers = worker_count();
  const auto n = static_cast<std::int64_t>(count);
  if (workers == 1 || count < 2) {
    for (std::int64_t s = 0; s < n; ++s) out[s] = per_sample(static_cast<std::size_t>(s));
    return out;
  }
#pragma omp parallel for schedule(dynamic, 64) num_threads(workers > 0 ? workers : omp_get_max_threads())
  for (std::int64_t s = 0; s < n; ++s) out[s] = per_sample(static_cast<std::size_t>(s));
  return out;
}

}  // namespace omp

// Library code calls the parallel versions.
using omp::fwht;
using omp::map_samples;
using omp::pivotal_counts;

}  // namespace cubeinf::kernels
