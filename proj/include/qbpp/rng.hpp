#pragma once

#include <cstdint>
#include <initializer_list>

// Portable deterministic RNG used by the instance generator.
// splitmix64 drives seeding and key derivation, xoshiro256** produces the
// stream. Bounded draws use the 128-bit multiply-shift reduction, which is
// branch-free and identical on every platform.
namespace qbpp {

constexpr std::uint64_t splitmix64_mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Stream key derivation: fold each part into the running state with one
// splitmix64 round. Used as H(...H(H(seed)^p1)^p2...).
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed,
                                           std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = splitmix64_mix(seed);
  for (std::uint64_t p : parts) s = splitmix64_mix(s ^ p);
  return s;
}

class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = sm;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform draw from [0, range) via multiply-shift; bias is below 2^-57
  // for the ranges used here (at most a few hundred values).
  std::uint64_t bounded(std::uint64_t range) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * range) >> 64);
  }

  // Uniform integer in [lo, hi], inclusive.
  long long uniform_int(long long lo, long long hi) {
    return lo + static_cast<long long>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace qbpp
