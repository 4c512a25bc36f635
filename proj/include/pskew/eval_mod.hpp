#pragma once

#include <stdexcept>
#include <vector>

#include "pskew/circuit.hpp"
#include "pskew/dense_poly.hpp"
#include "pskew/residue.hpp"
#include "pskew/sparse_poly.hpp"
#include "pskew/tropical.hpp"

namespace pskew {

// Map a succinct univariate polynomial to its residue mod T: every monomial
// a*x^N becomes a * (x^N mod T), sharing the square table in `cache`.
inline DensePoly<PrimeField> residue_of_sparse(const SparsePolyBig& p,
                                               XPowerCache& cache) {
  const PrimeField& f = cache.ctx().field();
  if (p.num_vars() != 1) {
    throw std::invalid_argument("residue_of_sparse: polynomial is not univariate");
  }
  if (!p.ring().is_fp() || p.ring().p != f.modulus()) {
    throw std::invalid_argument("residue_of_sparse: ring mismatch");
  }
  auto acc = DensePoly<PrimeField>::zero(f);
  for (const auto& m : p.monomials()) {
    const std::uint64_t c = f.reduce_big(m.coeff);
    if (c == 0) continue;
    acc = poly_add(acc, poly_scale(cache.pow(m.exps[0]), c));
  }
  return acc;
}

// Evaluate a univariate circuit over F_p modulo the test polynomial. Input
// monomials go through modular powering; internal gates are evaluated in
// topological order with a reduction after every multiplication, so all
// intermediates stay below twice the modulus degree.
inline DensePoly<PrimeField> eval_mod(const PowerfulSkewCircuit& c,
                                      const ResidueCtx& ctx) {
  if (c.num_vars() != 1) {
    throw std::invalid_argument("eval_mod: circuit is not univariate");
  }
  if (!c.ring().is_fp() || c.ring().p != ctx.field().modulus()) {
    throw std::invalid_argument("eval_mod: circuit ring does not match context");
  }
  XPowerCache cache(ctx);
  const auto order = c.topological_order();
  std::vector<DensePoly<PrimeField>> vals(
      c.gate_count(), DensePoly<PrimeField>::zero(ctx.field()));
  for (std::size_t idx : order) {
    const auto& g = c.gate_at(idx).second;
    switch (g.op) {
      case CircuitGate::Op::input:
        vals[idx] = residue_of_sparse(*g.poly, cache);
        break;
      case CircuitGate::Op::add:
        vals[idx] = poly_add(vals[c.index_of(g.lhs)], vals[c.index_of(g.rhs)]);
        break;
      case CircuitGate::Op::mul:
        vals[idx] = ctx.mul(vals[c.index_of(g.lhs)], vals[c.index_of(g.rhs)]);
        break;
    }
  }
  return vals[c.index_of(c.output())];
}

}  // namespace pskew
