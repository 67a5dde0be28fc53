#pragma once

// Pinned pseudo-random generator so that seeded outputs are reproducible in any language.
//
//   seeding:  state[i] = splitmix64 outputs 1..4 starting from `seed`
//   stream t: seed' = splitmix64_mix(seed ^ splitmix64_mix(t + 0x9E3779B97F4A7C15))
//   next():   xoshiro256** 1.0 (Blackman & Vigna)
//   below(b): draw x = next() until x >= (2^64 - b) mod b, return x mod b

#include <array>
#include <cstdint>
#include <stdexcept>

namespace hardgi {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) {
      x += 0x9E3779B97F4A7C15ULL;
      s = splitmix64_mix(x);
    }
  }

  static Xoshiro256StarStar from_state(const std::array<std::uint64_t, 4>& state) {
    Xoshiro256StarStar g(0);
    g.s_ = state;
    return g;
  }

  /// Independent generator for trial `index` of a batch seeded with `seed`.
  static Xoshiro256StarStar for_stream(std::uint64_t seed, std::uint64_t index) {
    return Xoshiro256StarStar(splitmix64_mix(seed ^ splitmix64_mix(index + 0x9E3779B97F4A7C15ULL)));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below: zero bound");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace hardgi
