#pragma once

#include <cmath>
#include <cstdint>

namespace hyloc {

/// Mixes a 64-bit state into a well-distributed output (splitmix64 finalizer).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and up to three
/// indices. Index-based derivation keeps parallel trial execution
/// reproducible regardless of scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0,
                                    std::uint64_t c = 0) noexcept {
  std::uint64_t s = splitmix64(master ^ 0x5bf03635d0c18e6dULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ (b + 0x9e3779b97f4a7c15ULL));
  s = splitmix64(s ^ (c + 0x3c6ef372fe94f82aULL));
  return s;
}

/// Small deterministic generator (xorshift-style state walk through
/// splitmix64). Behaviour does not depend on the standard library's
/// distribution implementations, so seeded runs are bit-reproducible
/// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x853c49e6748fea9bULL)) {}

  std::uint64_t next_u64() noexcept {
    state_ = splitmix64(state_);
    return state_;
  }

  /// Uniform in [0, 1) with 53 bits of randomness.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  /// Standard normal via Box-Muller. Stateless between calls (no cached
  /// second deviate), so consumption order is easy to reason about.
  double normal() noexcept {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) noexcept {
    return mean + stddev * normal();
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    // Rejection-free modulo is fine here; n is tiny compared to 2^64.
    return next_u64() % n;
  }

 private:
  std::uint64_t state_;
};

}  // namespace hyloc
