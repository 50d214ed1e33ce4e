#pragma once

#include <cstdint>

namespace robustf2 {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Counter-mode SplitMix64 stream. Forking derives an independent sub-stream
/// from (key, tag); the derived key does not depend on how many values the
/// parent has already drawn, so component seeding is order-insensitive.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix64(key_ ^ counter_);
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  Rng fork(std::uint64_t tag) const {
    Rng child(0);
    child.key_ = mix64(key_ + 0x9e3779b97f4a7c15ULL * (tag + 1));
    child.counter_ = 0;
    return child;
  }

  Rng fork(std::uint64_t tag_a, std::uint64_t tag_b) const { return fork(tag_a).fork(tag_b); }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace robustf2
