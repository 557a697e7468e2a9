#include "hmrfcs/rng.hpp"

#include <cmath>
#include <numbers>

namespace hmrfcs {

double RandomSource::normal() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::uint32_t> RandomSource::permutation(std::uint32_t n) {
  std::vector<std::uint32_t> ids(n);
  for (std::uint32_t i = 0; i < n; ++i) ids[i] = i;
  for (std::uint32_t i = n; i > 1; --i) {
    const std::uint64_t j = next_below(i);
    std::swap(ids[i - 1], ids[j]);
  }
  return ids;
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t context_hash) {
  std::uint64_t x = base ^ (context_hash + 0x9E3779B97F4A7C15ULL +
                            (base << 6) + (base >> 2));
  // one splitmix64 round to decorrelate nearby bases
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace hmrfcs
