#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pskew/bigint.hpp"
#include "pskew/prime_field.hpp"

namespace pskew {

// The ring of integers, as a coefficient ring for DensePoly.
struct IntRing {
  using Value = BigInt;

  Value zero() const { return BigInt(0); }
  Value one() const { return BigInt(1); }
  bool is_zero(const Value& a) const { return sgn(a) == 0; }

  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value neg(const Value& a) const { return -a; }
  Value mul(const Value& a, const Value& b) const { return a * b; }

  bool operator==(const IntRing&) const { return true; }
  bool operator!=(const IntRing&) const { return false; }
};

// Runtime tag for the coefficient ring of circuits and sparse polynomials:
// either Z or F_p. Dense arithmetic is templated instead; this tag is what
// flows through files and the CLI.
struct RingSpec {
  enum class Kind { integers, prime };

  Kind kind = Kind::integers;
  std::uint64_t p = 0;

  static RingSpec integers() { return RingSpec{Kind::integers, 0}; }
  static RingSpec fp(std::uint64_t p) {
    PrimeField check(p);  // validates primality and size
    (void)check;
    return RingSpec{Kind::prime, p};
  }

  bool is_fp() const { return kind == Kind::prime; }

  PrimeField field() const {
    if (!is_fp()) throw std::logic_error("RingSpec: not a prime field");
    return PrimeField(p);
  }

  std::string to_string() const {
    return is_fp() ? "fp:" + std::to_string(p) : "z";
  }

  static RingSpec parse(const std::string& s) {
    if (s == "z" || s == "Z") return integers();
    if (s.rfind("fp:", 0) == 0) {
      const std::string digits = s.substr(3);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("bad ring spec: " + s);
      }
      return fp(std::stoull(digits));
    }
    throw std::invalid_argument("bad ring spec: " + s + " (expected z or fp:<p>)");
  }

  bool operator==(const RingSpec& o) const {
    return kind == o.kind && (kind == Kind::integers || p == o.p);
  }
  bool operator!=(const RingSpec& o) const { return !(*this == o); }
};

}  // namespace pskew
