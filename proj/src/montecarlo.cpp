#include "cubeinf/montecarlo.hpp"

#include <atomic>
#include <stdexcept>

namespace cubeinf {

namespace {
std::atomic<int> g_workers{0};
}

Estimate summarize(std::span<const double> values) {
  Estimate e;
  e.samples = values.size();
  if (values.empty()) return e;
  // Two-pass for stability; order is fixed so the result is reproducible.
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    e.se = std::sqrt(var / static_cast<double>(values.size()));
  }
  return e;
}

bool agree_within(const Estimate& a, const Estimate& b, double sigmas, double floor) {
  return std::abs(a.mean - b.mean) <= sigmas * pooled_stderr(a, b) + floor;
}

double column_mean(std::span<const double> column) {
  if (column.empty()) return 0.0;
  double sum = 0.0;
  for (double v : column) sum += v;
  return sum / static_cast<double>(column.size());
}

double linearized_stderr(const std::vector<std::vector<double>>& columns,
                         std::span<const double> gradient) {
  if (columns.size() != gradient.size())
    throw std::invalid_argument("linearized_stderr: gradient size mismatch");
  if (columns.empty() || columns.front().size() < 2) return 0.0;
  const std::size_t n = columns.front().size();
  std::vector<double> means;
  means.reserve(columns.size());
  for (const auto& c : columns) {
    if (c.size() != n) throw std::invalid_argument("linearized_stderr: ragged columns");
    means.push_back(column_mean(c));
  }
  double ss = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double psi = 0.0;
    for (std::size_t j = 0; j < columns.size(); ++j) psi += gradient[j] * (columns[j][s] - means[j]);
    ss += psi * psi;
  }
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

void set_worker_count(int workers) {
  if (workers < 0) throw std::invalid_argument("worker count must be >= 0");
  g_workers.store(workers);
}

int worker_count() { return g_workers.load(); }

}  // namespace cubeinf
