#pragma once

#include <cstdint>
#include <random>

namespace dyadic {

namespace detail {

// splitmix64 step; used only to whiten (seed, stream, salt) into one word
inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic trial RNG: the engine is mt19937_64 (pinned by the
/// standard), seeded from (master seed, stream, salt); uniform doubles
/// are mapped from raw bits so results do not depend on the standard
/// library's distribution implementations.
class TrialRng {
 public:
  TrialRng(std::uint64_t master, std::uint64_t stream, std::uint64_t salt = 0) {
    std::uint64_t s = master;
    std::uint64_t a = detail::splitmix64(s);
    s ^= stream * 0xda942042e4dd58b5ULL;
    std::uint64_t b = detail::splitmix64(s);
    s ^= salt + 0x9e3779b97f4a7c15ULL;
    std::uint64_t c = detail::splitmix64(s);
    eng_.seed(a ^ (b << 1) ^ c);
  }

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform in [-b, b].
  double symmetric(double b) { return uniform(-b, b); }

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(bits() % span);
  }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dyadic
