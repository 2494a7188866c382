#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>

namespace pdcov {

// SplitMix64 output function (Steele, Lea & Flood). Bijective on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

__extension__ using uint128_t = unsigned __int128;

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Derives an independent stream key from a parent seed and a path of
// integer labels, e.g. stream_seed(master, i, j) for the (i, j) edge test.
template <class... Keys>
constexpr std::uint64_t stream_seed(std::uint64_t seed, Keys... keys) noexcept {
  std::uint64_t h = mix64(seed + kGoldenGamma);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(keys) * kGoldenGamma +
                        0x632be59bd9b4e019ULL))),
   ...);
  return h;
}

// Counter-based generator: the k-th draw is mix64(key + k * gamma), so a
// stream is fully determined by its key and never shares state with
// another stream. Distributions are implemented here rather than taken
// from <random> so that draws are identical across standard libraries.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  template <class... Keys>
  static constexpr Rng stream(std::uint64_t seed, Keys... keys) noexcept {
    return Rng(stream_seed(seed, keys...));
  }

  constexpr std::uint64_t next_u64() noexcept {
    counter_ += kGoldenGamma;
    return mix64(key_ + counter_);
  }

  // Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  // Uniform integer in [0, bound) without modulo bias (Lemire).
  std::uint64_t below(std::uint64_t bound) noexcept {
    std::uint64_t x = next_u64();
    uint128_t m = static_cast<uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  // Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // (0, 1] so the logarithm is finite.
    const double u1 =
        static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Chi-squared with an integer number of degrees of freedom.
  double chi_squared(int dof) noexcept {
    double s = 0.0;
    for (int k = 0; k < dof; ++k) {
      const double z = normal();
      s += z * z;
    }
    return s;
  }

  // Fisher-Yates, last position first.
  template <class T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pdcov
