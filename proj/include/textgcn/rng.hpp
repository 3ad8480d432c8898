#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace textgcn {

/// Purpose tags for independent random streams derived from one run seed.
enum class Stream : std::uint64_t {
  init = 1,
  dropout = 2,
  validation_split = 3,
  label_subsample = 4,
  baseline = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded generator. Distribution code is written out here rather than taken
/// from <random> so sequences do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, Stream stream)
      : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)))) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n); n > 0.
  std::size_t below(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace textgcn
