#ifndef VGANG_RNG_HPP
#define VGANG_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vgang {

/**
 * Deterministic random source: a seeded mt19937_64 (fully specified by the
 * standard) with in-house rejection-sampled integer draws, because the
 * standard distributions are not bit-portable across library
 * implementations. Published seeds therefore reproduce tasksets exactly on
 * every platform.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Unbiased uniform draw from [lo, hi], inclusive.
  std::uint64_t uniform_u64(std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t range = hi - lo + 1;
    if (range == 0) {  // the full 64-bit range
      return engine_();
    }
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + draw % range;
  }

  int uniform_int(int lo, int hi) {
    return static_cast<int>(uniform_u64(static_cast<std::uint64_t>(lo),
                                        static_cast<std::uint64_t>(hi)));
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; good avalanche for seed derivation.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent child seed from a master seed and a path of
/// indices (experiment point, taskset number, ...). Order-sensitive.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t x = mix64(master);
  for (std::uint64_t p : path) {
    x = mix64(x ^ mix64(p));
  }
  return x;
}

}  // namespace vgang

#endif  // VGANG_RNG_HPP
