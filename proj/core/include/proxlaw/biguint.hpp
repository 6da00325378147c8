#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace proxlaw {

// Arbitrary-precision unsigned integer, 32-bit limbs, little-endian.
// Supports exactly the operations the exact binomial arithmetic needs.
class BigUint {
 public:
  BigUint() = default;
  explicit BigUint(std::uint64_t value);

  static BigUint pow2(std::size_t exponent);

  BigUint& operator+=(const BigUint& other);
  friend BigUint operator+(BigUint a, const BigUint& b) {
    a += b;
    return a;
  }

  BigUint& mul_small(std::uint32_t factor);
  // Divides in place, returns the remainder. Divisor must be nonzero.
  std::uint32_t divmod_small(std::uint32_t divisor);

  std::strong_ordering operator<=>(const BigUint& other) const;
  bool operator==(const BigUint& other) const = default;

  bool is_zero() const noexcept { return limbs_.empty(); }
  // Number of significant bits; 0 for zero.
  std::size_t bit_length() const noexcept;
  bool bit(std::size_t i) const noexcept;
  // True iff any bit strictly below position `i` is set.
  bool any_bit_below(std::size_t i) const noexcept;
  // Bits [i, i+64) as an integer (zero-padded above bit_length).
  std::uint64_t bits_from(std::size_t i) const noexcept;

  std::string to_decimal() const;
  // Nearest double to value * 2^scale_pow2, round half to even.
  double to_double_scaled(int scale_pow2) const noexcept;
  double to_double() const noexcept { return to_double_scaled(0); }

 private:
  void trim();
  std::vector<std::uint32_t> limbs_;
};

}  // namespace proxlaw
