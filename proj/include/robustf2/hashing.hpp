#pragma once

#include <cstdint>

#include "robustf2/rng.hpp"

namespace robustf2 {

/// Degree-3 polynomial hash over GF(2^61 - 1). Uniform coefficients give a
/// 4-wise independent family; one evaluation yields both the bucket (high
/// bits, fast-range) and the sign (low bit) for a sketch row.
class FourwiseHash {
 public:
  FourwiseHash() = default;

  explicit FourwiseHash(Rng& rng) {
    for (std::uint64_t& c : coeff_) c = rng.next_u64() % kPrime;
  }

  std::uint64_t eval(std::uint64_t x) const {
    std::uint64_t acc = coeff_[3];
    acc = add(mul(acc, x), coeff_[2]);
    acc = add(mul(acc, x), coeff_[1]);
    acc = add(mul(acc, x), coeff_[0]);
    return acc;
  }

  std::uint64_t bucket(std::uint64_t hash, std::uint64_t cols) const {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(hash) * cols) >> 61);
  }

  static double sign(std::uint64_t hash) { return (hash & 1u) ? 1.0 : -1.0; }

  const std::uint64_t* coefficients() const { return coeff_; }

 private:
  static constexpr std::uint64_t kPrime = (1ULL << 61) - 1;

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    const __uint128_t z = static_cast<__uint128_t>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(z & kPrime);
    std::uint64_t hi = static_cast<std::uint64_t>(z >> 61);
    std::uint64_t s = lo + hi;
    if (s >= kPrime) s -= kPrime;
    return s;
  }

  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    if (s >= kPrime) s -= kPrime;
    return s;
  }

  std::uint64_t coeff_[4] = {0, 0, 0, 0};
};

}  // namespace robustf2
