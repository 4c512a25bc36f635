#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pskew/bigint.hpp"
#include "pskew/dense_poly.hpp"
#include "pskew/prime_field.hpp"

namespace pskew {

// Arithmetic in F_p[x] modulo a fixed monic polynomial T. Residues are
// DensePoly of degree < deg T. Immutable; operations are pure.
class ResidueCtx {
 public:
  ResidueCtx(PrimeField field, DensePoly<PrimeField> modulus)
      : field_(field), modulus_(std::move(modulus)) {
    if (modulus_.ring() != field_) {
      throw std::invalid_argument("ResidueCtx: modulus ring mismatch");
    }
    if (modulus_.is_zero() || modulus_.degree() < 1) {
      throw std::invalid_argument("ResidueCtx: modulus degree must be >= 1");
    }
    if (!modulus_.is_monic()) {
      throw std::invalid_argument("ResidueCtx: modulus must be monic");
    }
  }

  const PrimeField& field() const { return field_; }
  const DensePoly<PrimeField>& modulus() const { return modulus_; }
  std::size_t degree() const { return modulus_.degree(); }

  DensePoly<PrimeField> reduce(const DensePoly<PrimeField>& a) const {
    if (a.is_zero() || a.degree() < degree()) return a;
    return poly_divrem(a, modulus_).second;
  }

  DensePoly<PrimeField> mul(const DensePoly<PrimeField>& a,
                            const DensePoly<PrimeField>& b) const {
    return reduce(poly_mul(a, b));
  }

  // x as a residue (reduced, so deg T == 1 works too).
  DensePoly<PrimeField> x_residue() const {
    return reduce(DensePoly<PrimeField>::monomial(field_, field_.one(), 1));
  }

 private:
  PrimeField field_;
  DensePoly<PrimeField> modulus_;
};

// base^N mod T by square-and-multiply over the bits of N. This is the
// sequential stand-in for parallel modular powering: O(bitlen N) residue
// multiplications.
inline DensePoly<PrimeField> modpow(const DensePoly<PrimeField>& base,
                                    const BigInt& exp, const ResidueCtx& ctx) {
  if (sgn(exp) < 0) throw std::invalid_argument("modpow: negative exponent");
  if (base.ring() != ctx.field()) {
    throw std::invalid_argument("modpow: base ring mismatch");
  }
  if (!base.is_zero() && base.degree() >= ctx.degree()) {
    throw std::invalid_argument("modpow: base degree must be < modulus degree");
  }
  DensePoly<PrimeField> acc = ctx.reduce(
      DensePoly<PrimeField>::one(ctx.field()));
  const std::size_t bits = bit_length(exp);
  for (std::size_t i = bits; i-- > 0;) {
    acc = ctx.mul(acc, acc);
    if (bit_test(exp, i)) acc = ctx.mul(acc, base);
  }
  return acc;
}

// T_{r,b,t}(x) = Q_r(A_{b,t}(x)) with Q_r(y) = 1 + y + ... + y^{r-1} and
// A_{b,t}(x) = x^t + sum b_i x^i. Q_r is expanded by Horner:
// res <- res*A + 1, r-1 times. deg T = t*(r-1).
inline ResidueCtx build_test_modulus(std::uint64_t r,
                                     const std::vector<std::uint8_t>& b,
                                     std::uint64_t t, const PrimeField& field) {
  const std::size_t ell = b.size();
  if (ell < 1) throw std::invalid_argument("build_test_modulus: need ell >= 1");
  if (t < ell) throw std::invalid_argument("build_test_modulus: need t >= ell");
  if (!is_prime_u64(r)) {
    throw std::invalid_argument("build_test_modulus: r must be prime");
  }
  if (r == field.modulus()) {
    throw std::invalid_argument("build_test_modulus: invalid trial parameters (r == p)");
  }

  std::vector<std::uint64_t> acoeffs(static_cast<std::size_t>(t) + 1, 0);
  acoeffs[static_cast<std::size_t>(t)] = field.one();
  for (std::size_t i = 0; i < ell; ++i) {
    acoeffs[i] = b[i] ? field.one() : field.zero();
  }
  const auto a_poly = DensePoly<PrimeField>::from_coeffs(field, std::move(acoeffs));
  const auto one = DensePoly<PrimeField>::one(field);

  auto res = one;
  for (std::uint64_t i = 0; i + 1 < r; ++i) {
    res = poly_add(poly_mul(res, a_poly), one);
  }
  return ResidueCtx(field, std::move(res));
}

// Shared-squaring cache for powers x^N mod T. Callers own one per
// evaluation, so the ResidueCtx itself stays immutable.
class XPowerCache {
 public:
  explicit XPowerCache(const ResidueCtx& ctx) : ctx_(&ctx) {
    squares_.push_back(ctx.x_residue());
  }

  DensePoly<PrimeField> pow(const BigInt& n) {
    if (sgn(n) < 0) throw std::invalid_argument("XPowerCache: negative exponent");
    const std::size_t bits = bit_length(n);
    if (bits == 0) return ctx_->reduce(DensePoly<PrimeField>::one(ctx_->field()));
    // Small exponents are already reduced monomials.
    if (bits <= 63) {
      const std::uint64_t v = to_u64(n);
      if (v < ctx_->degree()) {
        return DensePoly<PrimeField>::monomial(ctx_->field(), ctx_->field().one(),
                                               static_cast<std::size_t>(v));
      }
    }
    while (squares_.size() < bits) {
      squares_.push_back(ctx_->mul(squares_.back(), squares_.back()));
    }
    DensePoly<PrimeField> acc =
        ctx_->reduce(DensePoly<PrimeField>::one(ctx_->field()));
    bool started = false;
    for (std::size_t i = 0; i < bits; ++i) {
      if (!bit_test(n, i)) continue;
      acc = started ? ctx_->mul(acc, squares_[i]) : squares_[i];
      started = true;
    }
    return acc;
  }

  const ResidueCtx& ctx() const { return *ctx_; }

 private:
  const ResidueCtx* ctx_;
  std::vector<DensePoly<PrimeField>> squares_;
};

}  // namespace pskew
