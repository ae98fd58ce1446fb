#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cubeinf {

/// Monte Carlo mean with its normal-approximation standard error.
struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t samples = 0;       // samples that entered the mean
  std::size_t undetermined = 0;  // samples dropped because evaluation ran out of budget

  double contamination() const noexcept {
    const auto total = samples + undetermined;
    return total == 0 ? 0.0 : static_cast<double>(undetermined) / static_cast<double>(total);
  }
};

Estimate summarize(std::span<const double> values);

/// Exactly-known quantity wrapped as an estimate.
inline Estimate exact_value(double v) { return Estimate{v, 0.0, 0, 0}; }

/// Pooled standard error of a difference of two independent estimates.
inline double pooled_stderr(const Estimate& a, const Estimate& b) {
  return std::sqrt(a.se * a.se + b.se * b.se);
}

/// |a - b| <= sigmas * pooled se, with an absolute floor for exact ties.
bool agree_within(const Estimate& a, const Estimate& b, double sigmas = 3.0, double floor = 1e-12);

/// Standard error of a smooth statistic g(mean_1, ..., mean_m) of per-sample
/// columns, by first-order linearisation: psi_s = sum_j grad_j (x_js - mean_j).
double linearized_stderr(const std::vector<std::vector<double>>& columns,
                         std::span<const double> gradient);

double column_mean(std::span<const double> column);

/// Worker count used by the OpenMP kernels. 0 means the OpenMP default.
void set_worker_count(int workers);
int worker_count();

}  // namespace cubeinf
