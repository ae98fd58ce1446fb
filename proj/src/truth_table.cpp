#include "cubeinf/truth_table.hpp"

#include <stdexcept>
#include <string>

namespace cubeinf {

Assignment pack_assignment(std::span<const int> omega) {
  if (omega.size() > static_cast<std::size_t>(kMaxTableBits))
    throw std::invalid_argument("assignment longer than the table cap");
  Assignment x = 0;
  for (std::size_t j = 0; j < omega.size(); ++j) {
    if (omega[j] == -1)
      x |= Assignment{1} << j;
    else if (omega[j] != 1)
      throw std::invalid_argument("assignment entries must be +1 or -1");
  }
  return x;
}

TruthTable::TruthTable(int n, std::vector<std::int8_t> values) : n_(n), values_(std::move(values)) {
  if (n < 0 || n > kMaxTableBits)
    throw std::invalid_argument("truth table bit count must be in [0, " + std::to_string(kMaxTableBits) + "]");
  if (values_.size() != (std::size_t{1} << n))
    throw std::invalid_argument("truth table must have exactly 2^n entries");
  for (auto v : values_)
    if (v != 1 && v != -1) throw std::invalid_argument("truth table entries must be +1 or -1");
}

TruthTable TruthTable::tabulate(int n, const std::function<int(Assignment)>& f) {
  if (n < 0 || n > kMaxTableBits)
    throw std::invalid_argument("truth table bit count must be in [0, " + std::to_string(kMaxTableBits) + "]");
  std::vector<std::int8_t> values(std::size_t{1} << n);
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = static_cast<std::int8_t>(f(static_cast<Assignment>(x)));
  return TruthTable(n, std::move(values));
}

int TruthTable::eval(std::span<const int> omega) const {
  if (omega.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("assignment length " + std::to_string(omega.size()) +
                                " does not match table size n = " + std::to_string(n_));
  return values_[pack_assignment(omega)];
}

PrefixDeterminacy::PrefixDeterminacy(const TruthTable& f) : levels_(static_cast<std::size_t>(f.n()) + 1) {
  const int n = f.n();
  levels_[n].assign(f.values().begin(), f.values().end());
  for (int k = n - 1; k >= 0; --k) {
    const auto& next = levels_[k + 1];
    auto& level = levels_[k];
    level.resize(std::size_t{1} << k);
    const std::size_t high = std::size_t{1} << k;
    for (std::size_t p = 0; p < level.size(); ++p) {
      const auto a = next[p];
      level[p] = (a != 0 && a == next[p | high]) ? a : 0;
    }
  }
}

bool determines(const TruthTable& f, Assignment x, Assignment mask) {
  const Assignment full = f.n() == 32 ? ~Assignment{0} : ((Assignment{1} << f.n()) - 1);
  const Assignment free = full & ~mask;
  const Assignment fixed = x & mask;
  const int value = f[fixed];
  // Enumerate submasks of `free`.
  Assignment sub = free;
  while (true) {
    if (f[fixed | sub] != value) return false;
    if (sub == 0) break;
    sub = (sub - 1) & free;
  }
  return true;
}

}  // namespace cubeinf
