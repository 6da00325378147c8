#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

// Pinned deterministic PRNG contract. Every seeded operation in this library
// draws from these primitives and nothing else, so identical seeds reproduce
// identical results across platforms, runs, and worker counts. The exact
// streams are frozen by reference vectors in the test suite; changing any
// constant here is a breaking change.
namespace proxlaw {

// Finalizer of the splitmix64 generator: bijective 64-bit mix.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Decorrelated seed for substream `index` of a master seed. Substreams are
// what make permutation tests independent of evaluation order: permutation i
// always uses substream_seed(seed, i) no matter which worker runs it.
constexpr std::uint64_t substream_seed(std::uint64_t seed,
                                       std::uint64_t index) noexcept {
  return splitmix64_mix(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// PCG-XSH-RR 64/32 (O'Neill). 64-bit LCG state, 32-bit output.
class Pcg32 {
 public:
  static constexpr std::uint64_t kDefaultStream = 0xDA3E39CB94B95BDBULL;
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;

  explicit constexpr Pcg32(std::uint64_t initstate,
                           std::uint64_t initseq = kDefaultStream) noexcept
      : state_(0), inc_((initseq << 1) | 1u) {
    next();
    state_ += initstate;
    next();
  }

  constexpr std::uint32_t next() noexcept {
    const std::uint64_t oldstate = state_;
    state_ = oldstate * kMultiplier + inc_;
    const auto xorshifted =
        static_cast<std::uint32_t>(((oldstate >> 18) ^ oldstate) >> 27);
    const auto rot = static_cast<std::uint32_t>(oldstate >> 59);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  // Unbiased integer in [0, bound) by threshold rejection.
  constexpr std::uint32_t bounded(std::uint32_t bound) noexcept {
    const std::uint32_t threshold = (0u - bound) % bound;
    for (;;) {
      const std::uint32_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 32 bits of precision.
  constexpr double uniform01() noexcept {
    return static_cast<double>(next()) * 0x1p-32;
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

// Fisher-Yates shuffle of 0..n-1, high index down, k = bounded(j + 1).
inline std::vector<std::uint32_t> shuffled_indices(std::size_t n, Pcg32& rng) {
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  for (std::size_t j = n; j-- > 1;) {
    const std::uint32_t k = rng.bounded(static_cast<std::uint32_t>(j + 1));
    std::swap(idx[j], idx[k]);
  }
  return idx;
}

}  // namespace proxlaw
