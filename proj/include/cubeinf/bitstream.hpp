#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace cubeinf {

/// Bit positions are 1-based throughout the library.
using Position = std::uint64_t;

/// splitmix64 finaliser; the building block of every counter-based stream.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for sample `index` of a run with master seed `master`. `stream`
/// separates independent sources belonging to one sample (input, noise,
/// auxiliary randomness, ...).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t stream = 0) noexcept {
  return mix64(mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL)) + stream * 0xd1b54a32d192ed03ULL);
}

/// Keyed 64-bit word at (seed, position).
constexpr std::uint64_t word_at(std::uint64_t seed, Position i) noexcept {
  return mix64(seed ^ mix64(i * 0xa0761d6478bd642fULL));
}

/// Fair ±1 value at (seed, position).
constexpr int fair_bit_at(std::uint64_t seed, Position i) noexcept {
  return (word_at(seed, i) >> 63) ? -1 : 1;
}

/// Uniform double in [0,1) at (seed, position).
constexpr double uniform_at(std::uint64_t seed, Position i) noexcept {
  return static_cast<double>(word_at(seed, i) >> 11) * 0x1.0p-53;
}

/// Anything that can be asked for the value of bit i.
class BitSource {
 public:
  virtual ~BitSource() = default;
  virtual int bit(Position i) = 0;
};

/// A uniformly random element of {-1,+1}^N realised on demand. Values are a
/// pure function of (seed, position) unless forced.
class LazyInput final : public BitSource {
 public:
  explicit LazyInput(std::uint64_t seed) : seed_(seed) {}

  int bit(Position i) override;

  /// Pin position i to `value` (±1). Forced values take precedence.
  void force(Position i, int value);
  void clear_forced() { forced_.clear(); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t realized() const noexcept { return cache_.size(); }

 private:
  static constexpr Position kDenseLimit = Position{1} << 22;

  std::uint64_t seed_;
  std::vector<std::int8_t> cache_;  // 0 = not yet realised
  std::map<Position, std::int8_t> forced_;
};

/// Pair (omega, omega^eps): each bit is kept with probability 1-eps and
/// otherwise replaced by an independent fair bit. The object itself reads as
/// the noised leg; base() is the original.
class NoiseCoupling final : public BitSource {
 public:
  NoiseCoupling(BitSource& base, double epsilon, std::uint64_t noise_seed);

  int bit(Position i) override;

  BitSource& base() noexcept { return base_; }
  double epsilon() const noexcept { return epsilon_; }
  bool kept(Position i) const noexcept;
  int fresh(Position i) const noexcept;

 private:
  BitSource& base_;
  double epsilon_;
  std::uint64_t keep_seed_;
  std::uint64_t fresh_seed_;
};

/// couple(input, eps); throws std::invalid_argument unless 0 <= eps <= 1.
NoiseCoupling couple(BitSource& input, double epsilon, std::uint64_t noise_seed);

/// omega^k: the base stream with bit k negated.
class FlipView final : public BitSource {
 public:
  FlipView(BitSource& base, Position k);
  int bit(Position i) override { return i == k_ ? -base_.bit(i) : base_.bit(i); }
  Position flipped() const noexcept { return k_; }

 private:
  BitSource& base_;
  Position k_;
};

}  // namespace cubeinf
