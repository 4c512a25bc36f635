#pragma once

#include "pskew/dense_poly.hpp"
#include "pskew/residue.hpp"
#include "pskew/tropical.hpp"

namespace pskew {

// Semiring adapters for the BP evaluators.

struct ResidueSemiring {
  const ResidueCtx* ctx;
  using Value = DensePoly<PrimeField>;

  Value zero() const { return Value::zero(ctx->field()); }
  Value one() const { return ctx->reduce(Value::one(ctx->field())); }
  Value add(const Value& a, const Value& b) const { return poly_add(a, b); }
  Value mul(const Value& a, const Value& b) const { return ctx->mul(a, b); }
};

struct MaxPlusSemiring {
  using Value = TropicalValue;
  Value zero() const { return TropicalValue::neg_infinity(); }
  Value one() const { return TropicalValue::finite(0); }
  Value add(const Value& a, const Value& b) const { return tropical_max(a, b); }
  Value mul(const Value& a, const Value& b) const { return tropical_sum(a, b); }
};

struct MinPlusSemiring {
  using Value = TropicalValue;
  Value zero() const { return TropicalValue::pos_infinity(); }
  Value one() const { return TropicalValue::finite(0); }
  Value add(const Value& a, const Value& b) const { return tropical_min(a, b); }
  Value mul(const Value& a, const Value& b) const { return tropical_sum(a, b); }
};

}  // namespace pskew
