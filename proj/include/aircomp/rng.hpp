#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace aircomp {

// splitmix64 finalizer (Steele/Lea/Flood). Pinned as the project-wide mixing
// function: every random quantity in the simulator derives from it, so runs
// are bit-reproducible for a fixed master seed regardless of thread count.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and a path of
// indices, e.g. derive_seed(master, {cluster, branch, trial}). Streams with
// different paths are decorrelated by construction.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64_mix(master ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t idx : path) {
    s = splitmix64_mix(s ^ splitmix64_mix(idx + 0x2545f4914f6cdd1dULL));
  }
  return s;
}

// Small deterministic generator: splitmix64 state advance, Box-Muller for
// Gaussians (two fresh uniforms per draw, no cached spare).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed), key_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Standard normal via Box-Muller. 1 - u is in (0, 1], so the log argument
  // never vanishes.
  double next_gaussian() {
    double u = next_unit();
    double v = next_unit();
    double r = std::sqrt(-2.0 * std::log(1.0 - u));
    return r * std::cos(6.283185307179586 * v);
  }

  double next_gaussian(double sigma) { return sigma * next_gaussian(); }

  // Integer in {0, ..., bound-1} by rejection (bound must be nonzero).
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Child stream keyed on the construction seed, not the evolved state, so
  // substream(i) is the same no matter how much of the parent was consumed.
  Rng substream(std::uint64_t index) const {
    return Rng(derive_seed(key_, {index}));
  }

 private:
  std::uint64_t state_;
  std::uint64_t key_;
};

}  // namespace aircomp
