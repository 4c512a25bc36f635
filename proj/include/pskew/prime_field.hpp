#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pskew/bigint.hpp"

namespace pskew {

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

// The field F_p for a small prime p. Elements are canonical representatives
// in [0, p-1]. The modulus is capped at 31 bits so that sums of products
// can be accumulated in uint64 without per-term reduction.
class PrimeField {
 public:
  using Value = std::uint64_t;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p >= (std::uint64_t{1} << 31)) {
      throw std::invalid_argument("PrimeField: modulus must fit in 31 bits");
    }
    if (!is_prime_u64(p)) {
      throw std::invalid_argument("PrimeField: " + std::to_string(p) +
                                  " is not prime");
    }
  }

  std::uint64_t modulus() const { return p_; }

  Value zero() const { return 0; }
  Value one() const { return p_ == 1 ? 0 : 1 % p_; }
  bool is_zero(Value a) const { return a == 0; }

  Value add(Value a, Value b) const {
    Value s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Value sub(Value a, Value b) const { return a >= b ? a - b : a + p_ - b; }
  Value neg(Value a) const { return a == 0 ? 0 : p_ - a; }
  Value mul(Value a, Value b) const { return (a * b) % p_; }

  Value reduce_u64(std::uint64_t a) const { return a % p_; }

  Value reduce_big(const BigInt& a) const {
    BigInt m = a % BigInt(static_cast<unsigned long>(p_));
    if (sgn(m) < 0) m += BigInt(static_cast<unsigned long>(p_));
    return static_cast<Value>(mpz_get_ui(m.get_mpz_t()));
  }

  bool operator==(const PrimeField& other) const { return p_ == other.p_; }
  bool operator!=(const PrimeField& other) const { return p_ != other.p_; }

 private:
  std::uint64_t p_;
};

}  // namespace pskew
