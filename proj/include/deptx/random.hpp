#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace deptx {

/// Deterministic random stream. Bounded draws use rejection sampling on the
/// raw engine output so results do not depend on the standard library's
/// distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for item `ordinal` of a run seeded with `seed`.
  static RandomStream split(std::uint64_t seed, std::uint64_t ordinal) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(ordinal),
                      static_cast<std::uint32_t>(ordinal >> 32)};
    return RandomStream(seq);
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == ~std::uint64_t{0}) return engine_();
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range + 1) % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return lo + x % range;
  }

  std::size_t index(std::size_t size) { return static_cast<std::size_t>(uniform(0, size - 1)); }

  /// First `k` elements of `items` become a uniform sample without
  /// replacement, in draw order (partial Fisher-Yates).
  template <typename T>
  void partial_shuffle(std::vector<T>& items, std::size_t k) {
    for (std::size_t i = 0; i < k && i + 1 < items.size(); ++i) {
      auto j = static_cast<std::size_t>(uniform(i, items.size() - 1));
      std::swap(items[i], items[j]);
    }
  }

 private:
  explicit RandomStream(std::seed_seq& seq) : engine_(seq) {}

  std::mt19937_64 engine_;
};

}  // namespace deptx
