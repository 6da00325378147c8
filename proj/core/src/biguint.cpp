#include "proxlaw/biguint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "proxlaw/errors.hpp"

namespace proxlaw {

BigUint::BigUint(std::uint64_t value) {
  if (value != 0) {
    limbs_.push_back(static_cast<std::uint32_t>(value));
    if (value >> 32) {
      limbs_.push_back(static_cast<std::uint32_t>(value >> 32));
    }
  }
}

BigUint BigUint::pow2(std::size_t exponent) {
  BigUint out;
  out.limbs_.assign(exponent / 32 + 1, 0);
  out.limbs_.back() = std::uint32_t{1} << (exponent % 32);
  return out;
}

void BigUint::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) {
    limbs_.pop_back();
  }
}

BigUint& BigUint::operator+=(const BigUint& other) {
  const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
  limbs_.resize(n, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t sum = carry + limbs_[i];
    if (i < other.limbs_.size()) sum += other.limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(sum);
    carry = sum >> 32;
  }
  if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  return *this;
}

BigUint& BigUint::mul_small(std::uint32_t factor) {
  if (factor == 0) {
    limbs_.clear();
    return *this;
  }
  std::uint64_t carry = 0;
  for (auto& limb : limbs_) {
    const std::uint64_t prod = std::uint64_t{limb} * factor + carry;
    limb = static_cast<std::uint32_t>(prod);
    carry = prod >> 32;
  }
  if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  return *this;
}

std::uint32_t BigUint::divmod_small(std::uint32_t divisor) {
  if (divisor == 0) {
    throw Error(Errc::bad_parameter, "divisor", "division by zero");
  }
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    const std::uint64_t cur = (rem << 32) | limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(cur / divisor);
    rem = cur % divisor;
  }
  trim();
  return static_cast<std::uint32_t>(rem);
}

std::strong_ordering BigUint::operator<=>(const BigUint& other) const {
  if (limbs_.size() != other.limbs_.size()) {
    return limbs_.size() <=> other.limbs_.size();
  }
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != other.limbs_[i]) return limbs_[i] <=> other.limbs_[i];
  }
  return std::strong_ordering::equal;
}

std::size_t BigUint::bit_length() const noexcept {
  if (limbs_.empty()) return 0;
  const std::uint32_t top = limbs_.back();
  return (limbs_.size() - 1) * 32 + (32 - std::countl_zero(top));
}

bool BigUint::bit(std::size_t i) const noexcept {
  const std::size_t limb = i / 32;
  if (limb >= limbs_.size()) return false;
  return (limbs_[limb] >> (i % 32)) & 1u;
}

bool BigUint::any_bit_below(std::size_t i) const noexcept {
  const std::size_t whole = std::min(i / 32, limbs_.size());
  for (std::size_t l = 0; l < whole; ++l) {
    if (limbs_[l] != 0) return true;
  }
  const std::size_t rest = i % 32;
  if (rest != 0 && i / 32 < limbs_.size()) {
    if (limbs_[i / 32] & ((std::uint32_t{1} << rest) - 1)) return true;
  }
  return false;
}

std::uint64_t BigUint::bits_from(std::size_t i) const noexcept {
  std::uint64_t out = 0;
  for (std::size_t b = 0; b < 64; ++b) {
    if (bit(i + b)) out |= std::uint64_t{1} << b;
  }
  return out;
}

std::string BigUint::to_decimal() const {
  if (is_zero()) return "0";
  BigUint work = *this;
  std::string digits;
  while (!work.is_zero()) {
    const std::uint32_t chunk = work.divmod_small(1'000'000'000u);
    if (work.is_zero()) {
      digits.insert(0, std::to_string(chunk));
    } else {
      std::string part = std::to_string(chunk);
      digits.insert(0, std::string(9 - part.size(), '0') + part);
    }
  }
  return digits;
}

double BigUint::to_double_scaled(int scale_pow2) const noexcept {
  if (is_zero()) return 0.0;
  const std::size_t bits = bit_length();
  // Exponent of the value's ulp once rounded to double, clamped at the
  // subnormal floor.
  const long top_exp =
      static_cast<long>(bits) - 1 + scale_pow2;  // value in [2^top, 2^(top+1))
  if (top_exp > 1023) return HUGE_VAL;
  long ulp_exp = top_exp - 52;
  if (ulp_exp < -1074) ulp_exp = -1074;
  // Bits of the integer below `cut` are rounded away.
  const long cut = ulp_exp - scale_pow2;
  if (cut <= 0) {
    // Fits exactly (bits <= 53 relative to the ulp).
    double x = 0.0;
    for (std::size_t l = limbs_.size(); l-- > 0;) {
      x = x * 4294967296.0 + static_cast<double>(limbs_[l]);
    }
    return std::ldexp(x, scale_pow2);
  }
  std::uint64_t q = bits_from(static_cast<std::size_t>(cut));
  const bool round_bit = bit(static_cast<std::size_t>(cut - 1));
  const bool sticky = cut >= 2 && any_bit_below(static_cast<std::size_t>(cut - 1));
  if (round_bit && (sticky || (q & 1))) {
    ++q;  // round half to even; a carry into 2^53 stays exact in double
  }
  return std::ldexp(static_cast<double>(q), static_cast<int>(ulp_exp));
}

}  // namespace proxlaw
