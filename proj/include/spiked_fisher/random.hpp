#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace spiked_fisher {

/// xoshiro256++ seeded through SplitMix64. Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr explicit Xoshiro256pp(std::uint64_t seed = 1) {
    std::uint64_t x = seed;
    for (auto& v : s_) v = splitmix64(x);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform01() {
    return static_cast<double>((*this)() >> 11) * (1.0 / 9007199254740992.0);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Counter-based seed derivation: the seed of stream `stream` in replication
/// `index` depends only on (base, index, stream), never on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index,
                                    std::uint64_t stream = 0) {
  std::uint64_t x = base;
  std::uint64_t h = Xoshiro256pp::splitmix64(x);
  x = h ^ (index * 0xD1B54A32D192ED03ULL);
  h = Xoshiro256pp::splitmix64(x);
  x = h ^ (stream * 0x8CB92BA72F3D8DD7ULL);
  return Xoshiro256pp::splitmix64(x);
}

}  // namespace spiked_fisher
