#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "dynlearn/support/hash.hpp"

namespace dynlearn {

/// Deterministic random source. All mappings from raw bits to values are
/// spelled out here so results do not depend on standard-library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform index in [0, n); modulo bias is irrelevant at these sizes.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

  /// Fisher-Yates shuffle with an explicit swap schedule.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Derives a subsystem seed from a master seed and a purpose tag.
  static std::uint64_t derive(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = fnv1a64(tag);
    h ^= seed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dynlearn
