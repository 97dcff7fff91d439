#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace gapchain {

/// Arbitrary-precision natural number. Thin value wrapper over mpz_class that
/// refuses negative values and serializes as a decimal string.
class BigNat {
 public:
  BigNat() = default;
  BigNat(std::uint64_t v);  // NOLINT(google-explicit-constructor)
  explicit BigNat(const mpz_class& v);

  static BigNat from_decimal(std::string_view text);
  std::string to_decimal() const;

  const mpz_class& mpz() const { return value_; }

  bool fits_u64() const;
  std::uint64_t to_u64() const;
  std::size_t bits() const;
  bool is_zero() const { return value_ == 0; }

  BigNat& operator+=(const BigNat& rhs);
  BigNat& operator*=(const BigNat& rhs);

  friend BigNat operator+(BigNat lhs, const BigNat& rhs) { return lhs += rhs; }
  friend BigNat operator*(BigNat lhs, const BigNat& rhs) { return lhs *= rhs; }
  friend BigNat operator%(const BigNat& lhs, const BigNat& rhs);
  /// Returns lhs - rhs; throws InvalidInput if the result would be negative.
  friend BigNat operator-(const BigNat& lhs, const BigNat& rhs);

  friend bool operator==(const BigNat& a, const BigNat& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::uint64_t mod_u64(std::uint64_t m) const;

 private:
  mpz_class value_{0};
};

BigNat gcd(const BigNat& a, const BigNat& b);

}  // namespace gapchain
