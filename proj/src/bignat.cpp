#include "gapchain/bignat.hpp"

#include "gapchain/error.hpp"

namespace gapchain {

BigNat::BigNat(std::uint64_t v) {
  // mpz_class has no portable uint64 constructor on every ABI.
  mpz_import(value_.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
}

BigNat::BigNat(const mpz_class& v) : value_(v) {
  if (value_ < 0) throw InvalidInput("BigNat: negative value " + v.get_str());
}

BigNat BigNat::from_decimal(std::string_view text) {
  if (text.empty()) throw InvalidInput("BigNat: empty decimal string");
  for (char c : text) {
    if (c < '0' || c > '9') throw InvalidInput("BigNat: invalid decimal string '" + std::string(text) + "'");
  }
  mpz_class v;
  if (v.set_str(std::string(text), 10) != 0) {
    throw InvalidInput("BigNat: invalid decimal string '" + std::string(text) + "'");
  }
  return BigNat(v);
}

std::string BigNat::to_decimal() const { return value_.get_str(10); }

bool BigNat::fits_u64() const { return mpz_sizeinbase(value_.get_mpz_t(), 2) <= 64; }

std::uint64_t BigNat::to_u64() const {
  if (!fits_u64()) throw InvalidInput("BigNat: value exceeds 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value_.get_mpz_t());
  return out;
}

std::size_t BigNat::bits() const { return value_ == 0 ? 0 : mpz_sizeinbase(value_.get_mpz_t(), 2); }

BigNat& BigNat::operator+=(const BigNat& rhs) {
  value_ += rhs.value_;
  return *this;
}

BigNat& BigNat::operator*=(const BigNat& rhs) {
  value_ *= rhs.value_;
  return *this;
}

BigNat operator%(const BigNat& lhs, const BigNat& rhs) {
  if (rhs.value_ == 0) throw InvalidInput("BigNat: modulus zero");
  mpz_class r;
  mpz_mod(r.get_mpz_t(), lhs.value_.get_mpz_t(), rhs.value_.get_mpz_t());
  return BigNat(r);
}

BigNat operator-(const BigNat& lhs, const BigNat& rhs) {
  if (lhs.value_ < rhs.value_) throw InvalidInput("BigNat: subtraction underflow");
  return BigNat(mpz_class(lhs.value_ - rhs.value_));
}

std::uint64_t BigNat::mod_u64(std::uint64_t m) const {
  if (m == 0) throw InvalidInput("BigNat: modulus zero");
  return BigNat(mpz_class(value_ % BigNat(m).mpz())).to_u64();
}

BigNat gcd(const BigNat& a, const BigNat& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.mpz().get_mpz_t(), b.mpz().get_mpz_t());
  return BigNat(g);
}

}  // namespace gapchain
