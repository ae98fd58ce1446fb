#include "cubeinf/kernels.hpp"

#include <stdexcept>

namespace cubeinf::kernels {

namespace {

void check_pow2(std::size_t size) {
  if (size == 0 || (size & (size - 1)) != 0)
    throw std::invalid_argument("fwht: length must be a power of two");
}

int threads() {
  const int w = worker_count();
  return w > 0 ? w : omp_get_max_threads();
}

// Below this size the OpenMP fork costs more than the transform.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

}  // namespace

namespace serial {

void fwht(std::span<double> values) {
  const std::size_t size = values.size();
  check_pow2(size);
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = values[i];
        const double b = values[i + half];
        values[i] = a + b;
        values[i + half] = a - b;
      }
    }
  }
}

std::vector<std::uint64_t> pivotal_counts(std::span<const std::int8_t> table, int n) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    std::uint64_t c = 0;
    for (std::size_t x = 0; x < table.size(); ++x) c += table[x] != table[x ^ bit];
    counts[j] = c;
  }
  return counts;
}

}  // namespace serial

namespace omp {

void fwht(std::span<double> values) {
  const std::size_t size = values.size();
  check_pow2(size);
  if (size < kParallelThreshold || threads() == 1) {
    serial::fwht(values);
    return;
  }
  double* data = values.data();
  const auto pairs = static_cast<std::int64_t>(size / 2);
  for (std::size_t half = 1; half < size; half <<= 1) {
    // Each butterfly pair is owned by exactly one iteration.
#pragma omp parallel for schedule(static) num_threads(threads())
    for (std::int64_t p = 0; p < pairs; ++p) {
      const std::size_t up = static_cast<std::size_t>(p);
      const std::size_t i = (up / half) * 2 * half + (up % half);
      const double a = data[i];
      const double b = data[i + half];
      data[i] = a + b;
      data[i + half] = a - b;
    }
  }
}

std::vector<std::uint64_t> pivotal_counts(std::span<const std::int8_t> table, int n) {
  if (table.size() < kParallelThreshold || threads() == 1) return serial::pivotal_counts(table, n);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
  const auto size = static_cast<std::int64_t>(table.size());
  for (int j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    std::uint64_t c = 0;
#pragma omp parallel for reduction(+ : c) schedule(static) num_threads(threads())
    for (std::int64_t x = 0; x < size; ++x)
      c += table[static_cast<std::size_t>(x)] != table[static_cast<std::size_t>(x) ^ bit];
    counts[j] = c;
  }
  return counts;
}

}  // namespace omp

}  // namespace cubeinf::kernels
