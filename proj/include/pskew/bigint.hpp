#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace pskew {

// Arbitrary-precision integer. Exponents, lengths and Z-coefficients are all
// BigInt; nothing in the succinct representations fits a machine word.
using BigInt = mpz_class;

// Number of bits in |x|; bit_length(0) == 0.
inline std::size_t bit_length(const BigInt& x) {
  if (sgn(x) == 0) return 0;
  return mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline bool bit_test(const BigInt& x, std::size_t i) {
  return mpz_tstbit(x.get_mpz_t(), i) != 0;
}

inline BigInt big_pow(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline bool fits_u64(const BigInt& x) {
  return sgn(x) >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const BigInt& x) {
  std::uint64_t lo = mpz_get_ui(x.get_mpz_t());
  return lo;
}

inline std::string to_string(const BigInt& x) { return x.get_str(); }

}  // namespace pskew
