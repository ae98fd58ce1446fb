#include "cubeinf/bitstream.hpp"

#include <stdexcept>

namespace cubeinf {

int LazyInput::bit(Position i) {
  if (i == 0) throw std::invalid_argument("bit positions are 1-based");
  if (!forced_.empty()) {
    if (auto it = forced_.find(i); it != forced_.end()) return it->second;
  }
  if (i >= kDenseLimit) return fair_bit_at(seed_, i);
  if (i >= cache_.size()) {
    std::size_t grown = cache_.empty() ? 64 : cache_.size();
    while (grown <= i) grown *= 2;
    cache_.resize(grown, 0);
  }
  auto& slot = cache_[i];
  if (slot == 0) slot = static_cast<std::int8_t>(fair_bit_at(seed_, i));
  return slot;
}

void LazyInput::force(Position i, int value) {
  if (i == 0) throw std::invalid_argument("bit positions are 1-based");
  if (value != 1 && value != -1) throw std::invalid_argument("forced bit must be +1 or -1");
  forced_[i] = static_cast<std::int8_t>(value);
}

NoiseCoupling::NoiseCoupling(BitSource& base, double epsilon, std::uint64_t noise_seed)
    : base_(base),
      epsilon_(epsilon),
      keep_seed_(derive_seed(noise_seed, 0, 1)),
      fresh_seed_(derive_seed(noise_seed, 0, 2)) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("noise epsilon must lie in [0,1]");
}

bool NoiseCoupling::kept(Position i) const noexcept {
  return uniform_at(keep_seed_, i) < 1.0 - epsilon_;
}

int NoiseCoupling::fresh(Position i) const noexcept { return fair_bit_at(fresh_seed_, i); }

int NoiseCoupling::bit(Position i) { return kept(i) ? base_.bit(i) : fresh(i); }

NoiseCoupling couple(BitSource& input, double epsilon, std::uint64_t noise_seed) {
  return NoiseCoupling(input, epsilon, noise_seed);
}

FlipView::FlipView(BitSource& base, Position k) : base_(base), k_(k) {
  if (k == 0) throw std::invalid_argument("bit positions are 1-based");
}

}  // namespace cubeinf
