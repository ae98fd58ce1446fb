#pragma once

// Independent brute-force reference computations. Nothing here calls the
// library's transforms, DP or matrix code; they exist to check it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline int chi(std::uint32_t S, std::uint32_t x) { return (__builtin_popcount(S & x) & 1) ? -1 : 1; }

/// f-hat(S) = 2^-n sum_x f(x) chi_S(x), by the definition (O(4^n)).
inline std::vector<double> spectrum(const std::vector<double>& f, int n) {
  const std::uint32_t size = 1U << n;
  std::vector<double> out(size, 0.0);
  for (std::uint32_t S = 0; S < size; ++S) {
    double sum = 0.0;
    for (std::uint32_t x = 0; x < size; ++x) sum += f[x] * chi(S, x);
    out[S] = sum / size;
  }
  return out;
}

/// I_k by flipping bit k at every point.
inline std::vector<double> influences(const std::vector<double>& f, int n) {
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    int count = 0;
    for (std::uint32_t x = 0; x < (1U << n); ++x) count += f[x] != f[x ^ (1U << k)];
    out[static_cast<std::size_t>(k)] = static_cast<double>(count) / (1U << n);
  }
  return out;
}

inline std::vector<double> random_boolean(int n, std::mt19937_64& rng) {
  std::vector<double> f(1U << n);
  for (auto& v : f) v = (rng() & 1) ? 1.0 : -1.0;
  return f;
}

inline std::vector<double> random_real(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> f(1U << n);
  for (auto& v : f) v = normal(rng);
  return f;
}

inline double mean_power(const std::vector<double>& f, double p) {
  double s = 0.0;
  for (double v : f) s += std::pow(std::abs(v), p);
  return s / f.size();
}

/// T_rho f(x) = E[f(y)] with y_j = x_j w.p. (1+rho)/2 independently.
inline std::vector<double> noise_pointwise(const std::vector<double>& f, int n, double rho) {
  const std::uint32_t size = 1U << n;
  std::vector<double> out(size, 0.0);
  for (std::uint32_t x = 0; x < size; ++x) {
    double acc = 0.0;
    for (std::uint32_t y = 0; y < size; ++y) {
      const int d = __builtin_popcount(x ^ y);
      acc += f[y] * std::pow((1 + rho) / 2, n - d) * std::pow((1 - rho) / 2, d);
    }
    out[x] = acc;
  }
  return out;
}

using EdgeList = std::vector<std::pair<int, int>>;

/// zeta by depth-first enumeration of every increasing path.
inline double zeta(int V, const EdgeList& edges) {
  double best = 0.0;
  for (int v = 0; v < V; ++v) {
    double total = 0.0;
    std::function<void(int, std::size_t, double)> walk = [&](int at, std::size_t next, double w) {
      for (std::size_t j = next; j < edges.size(); ++j)
        if (edges[j].first == at) {
          total += w / 2;
          walk(edges[j].second, j + 1, w / 2);
        }
    };
    walk(v, 0, 1.0);
    best = std::max(best, total);
  }
  return best;
}

/// Cycle kernel as an explicit product of per-edge matrices, e_n first.
inline std::vector<std::vector<double>> cycle_matrix(int V, const EdgeList& edges) {
  using M = std::vector<std::vector<double>>;
  auto eye = [V] {
    M m(V, std::vector<double>(V, 0.0));
    for (int i = 0; i < V; ++i) m[i][i] = 1.0;
    return m;
  };
  auto mul = [V](const M& a, const M& b) {
    M c(V, std::vector<double>(V, 0.0));
    for (int i = 0; i < V; ++i)
      for (int k = 0; k < V; ++k)
        for (int j = 0; j < V; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  M acc = eye();
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
    M e = eye();
    e[it->second][it->second] = 0.5;
    e[it->second][it->first] += 0.5;
    acc = mul(acc, e);
  }
  return acc;
}

}  // namespace oracle
