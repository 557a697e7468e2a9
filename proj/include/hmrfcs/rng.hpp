#pragma once

#include <cstdint>
#include <vector>

namespace hmrfcs {

// Seedable random source with a fully pinned algorithm so that runs are
// reproducible across platforms and across ports to other languages.
//
// Algorithm:
//   * state: xoshiro256++ (Blackman/Vigna), seeded by four consecutive
//     outputs of splitmix64(seed)
//   * next_u64(): one xoshiro256++ step
//   * uniform01(): ((next_u64() >> 11) + 0.5) * 2^-53, strictly inside (0,1)
//   * normal(): Box-Muller, consumes exactly two uniforms per call:
//       u1 = uniform01(), u2 = uniform01()
//       return sqrt(-2 ln u1) * cos(2 pi u2)
//     (the sine mate is discarded; no state is cached between calls)
//   * next_below(n): multiply-shift bound, high 64 bits of next_u64() * n
//   * permutation(n): Fisher-Yates over {0..n-1}, swapping from the back,
//     consumes exactly n-1 next_below() draws
//
// Any change to these constructions breaks recorded sequences; treat them
// as part of the file-format surface.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform draw in the open interval (0,1).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform draw in (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; exactly two uniform01() draws.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Random permutation of {0..n-1}.
  std::vector<std::uint32_t> permutation(std::uint32_t n);

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// Stable 64-bit FNV-1a over a byte string; used to derive per-row seeds.
std::uint64_t fnv1a64(const void* data, std::size_t len);

// Mixes a base seed with a context hash into an independent stream seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t context_hash);

}  // namespace hmrfcs
