#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cubeinf/bitstream.hpp"

namespace cubeinf {

inline constexpr int kMaxTableBits = 24;
inline constexpr int kMaxSpectralBits = 20;
inline constexpr int kMaxWitnessBits = 20;

/// Assignment of the first n bits, packed: bit (j-1) of the mask is set iff
/// omega_j = -1. With this convention chi_S(x) = (-1)^popcount(x & S).
using Assignment = std::uint32_t;

inline constexpr int omega_at(Assignment x, Position j) noexcept {
  return ((x >> (j - 1)) & 1U) ? -1 : 1;
}

/// Packs a ±1 vector (omega_1, ..., omega_n).
Assignment pack_assignment(std::span<const int> omega);

/// Dense ±1 table of a function of the first n bits.
class TruthTable {
 public:
  TruthTable(int n, std::vector<std::int8_t> values);

  /// Tabulates f over all 2^n assignments.
  static TruthTable tabulate(int n, const std::function<int(Assignment)>& f);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return values_.size(); }
  int operator[](Assignment x) const noexcept { return values_[x]; }
  std::span<const std::int8_t> values() const noexcept { return values_; }

  /// eval_table: throws std::invalid_argument on a length mismatch.
  int eval(std::span<const int> omega) const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  int n_;
  std::vector<std::int8_t> values_;
};

/// For every prefix length k and every assignment of bits 1..k, the value of
/// f if that prefix already determines it, else 0.
class PrefixDeterminacy {
 public:
  explicit PrefixDeterminacy(const TruthTable& f);

  /// Value determined by (omega_1..omega_k), or 0.
  int determined(int k, Assignment prefix) const noexcept { return levels_[k][prefix]; }
  int n() const noexcept { return static_cast<int>(levels_.size()) - 1; }

 private:
  std::vector<std::vector<std::int8_t>> levels_;
};

/// True iff f is constant over all completions of x outside the set `mask`.
bool determines(const TruthTable& f, Assignment x, Assignment mask);

}  // namespace cubeinf
