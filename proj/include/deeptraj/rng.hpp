#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace deeptraj {

/// SplitMix64 finalizer; also the seed-mixing hash for child streams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Child seed for task `index` of a parent stream: hash(parent_seed, index).
std::uint64_t derive_seed(std::uint64_t parent_seed, std::uint64_t index) noexcept;

/**
 * Seeded xoshiro256** generator.
 *
 * The state is expanded from the 64-bit seed with SplitMix64. All draws are
 * implemented here rather than through <random> distributions so that
 * sequences are identical across standard library implementations.
 * Single owner; derive independent streams with `child()`.
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1).
  double uniform() noexcept;
  /// Uniform in [a, b).
  double uniform(double a, double b) noexcept;
  /// Standard normal via the Box-Muller transform (pairs cached).
  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
  /// Uniform integer in [0, n); n must be positive.
  std::size_t index(std::size_t n) noexcept;

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  /// `count` distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

  RngStream child(std::uint64_t index) const noexcept { return RngStream(derive_seed(seed_, index)); }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace deeptraj
