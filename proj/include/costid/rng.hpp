#pragma once

// Seeded RNG streams. Every randomized stage derives an independent
// substream from (master seed, structured path) via a SplitMix64 hash
// chain, so work units can run in any order — or in parallel — and still
// reproduce the serial byte-for-byte results. Variate transforms are
// explicit (Box-Muller, inverse CDF) because the stdlib distribution
// objects carry implementation-defined state, which would break
// cross-run reproducibility guarantees.

#include <cstdint>
#include <cmath>
#include <initializer_list>
#include <random>

namespace costid::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive a child seed from a parent seed and a structured path, e.g.
// derive(master, {grid_index, repetition}).
inline std::uint64_t derive(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1] (safe for logs).
  double uniform_pos() { return 1.0 - uniform(); }

  // Standard normal via the Box-Muller cosine branch (stateless).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Unit-variance Laplace via inverse CDF (scale b = 1/sqrt(2)).
  double laplace_unit() {
    const double u = uniform() - 0.5;
    const double b = 0.70710678118654752440;
    const double t = std::fmax(1.0 - 2.0 * std::fabs(u), 1e-300);  // guard log(0)
    return (u >= 0.0 ? -b : b) * std::log(t);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free would bias for huge n; n here is tiny (sample counts),
    // so use rejection sampling for exactness.
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace costid::rng
