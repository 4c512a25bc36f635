#include <gtest/gtest.h>

#include "pskew/branching.hpp"
#include "pskew/circuit.hpp"
#include "pskew/eval_mod.hpp"
#include "pskew/oracle.hpp"
#include "pskew/semiring.hpp"
#include "test_util.hpp"

namespace pskew {
namespace {

const std::uint64_t kOracleBudget = 20000;

SparsePolyBig zmono(int k, long coeff, std::vector<unsigned long> exps) {
  std::vector<BigInt> e;
  for (auto v : exps) e.emplace_back(v);
  return SparsePolyBig::monomial(RingSpec::integers(), k, BigInt(coeff),
                                 std::move(e));
}

TEST(Validate, SkewnessViolation) {
  PowerfulSkewCircuit c(RingSpec::integers(), 1);
  c.add_input("i", zmono(1, 1, {1}));
  c.add_add("g1", "i", "i");
  c.add_add("g2", "i", "i");
  c.add_mul("bad", "g1", "g2");
  c.set_output("bad");
  auto diags = c.validate();
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_NE(diags[0].find("not skew"), std::string::npos);
}

TEST(Validate, SingleInputIsValid) {
  PowerfulSkewCircuit c(RingSpec::integers(), 1);
  c.add_input("i", zmono(1, 3, {2}));
  c.set_output("i");
  EXPECT_TRUE(c.validate().empty());
}

TEST(Validate, SelfReferenceIsCyclic) {
  PowerfulSkewCircuit c(RingSpec::integers(), 1);
  c.add_input("i", zmono(1, 1, {1}));
  c.add_add("loop", "loop", "i");
  c.set_output("loop");
  auto diags = c.validate();
  ASSERT_FALSE(diags.empty());
  bool cyclic = false;
  for (const auto& d : diags) {
    if (d.find("cyclic") != std::string::npos) cyclic = true;
  }
  EXPECT_TRUE(cyclic);
}

TEST(Tropical, Examples) {
  // max(3, 1 + 2) = 3
  TropicalCircuit tc;
  tc.mode = TropicalCircuit::Mode::max_plus;
  auto l3 = tc.add_leaf(TropicalValue::finite(3));
  auto l1 = tc.add_leaf(TropicalValue::finite(1));
  auto l2 = tc.add_leaf(TropicalValue::finite(2));
  auto s = tc.add_sum(l1, l2);
  tc.output = tc.add_combine(l3, s);
  EXPECT_EQ(tropical_eval(tc), TropicalValue::finite(3));

  // chain of n additions of 1
  TropicalCircuit chain;
  chain.mode = TropicalCircuit::Mode::min_plus;
  auto one = chain.add_leaf(TropicalValue::finite(1));
  auto acc = one;
  const int n = 37;
  for (int i = 1; i < n; ++i) acc = chain.add_sum(acc, one);
  chain.output = acc;
  EXPECT_EQ(tropical_eval(chain), TropicalValue::finite(n));
}

TEST(DegreeBound, Examples) {
  // Input x^(2^40)
  {
    PowerfulSkewCircuit c(RingSpec::integers(), 1);
    SparsePolyBig p(RingSpec::integers(), 1);
    p.add_term(1, {BigInt(1) << 40});
    c.add_input("i", std::move(p));
    c.set_output("i");
    EXPECT_EQ(c.degree_bound(1), BigInt(1) << 40);
  }
  // Mul(x^a, x^b) -> a + b
  {
    PowerfulSkewCircuit c(RingSpec::integers(), 1);
    c.add_input("u", zmono(1, 1, {17}));
    c.add_input("v", zmono(1, 1, {25}));
    c.add_mul("m", "u", "v");
    c.set_output("m");
    EXPECT_EQ(c.degree_bound(1), 42);
  }
}

// prod_{i=1..n} (x^{2^i} + 1) as a skew circuit.
PowerfulSkewCircuit geometric_product(int n) {
  PowerfulSkewCircuit c(RingSpec::integers(), 1);
  std::string acc;
  for (int i = 1; i <= n; ++i) {
    SparsePolyBig p(RingSpec::integers(), 1);
    p.add_term(1, {BigInt(1) << i});
    p.add_term(1, {BigInt(0)});
    const std::string in = "f" + std::to_string(i);
    c.add_input(in, std::move(p));
    if (acc.empty()) {
      acc = in;
    } else {
      const std::string m = "m" + std::to_string(i);
      c.add_mul(m, acc, in);
      acc = m;
    }
  }
  c.set_output(acc);
  return c;
}

TEST(DegreeBound, GeometricProductFamily) {
  for (int n = 1; n <= 10; ++n) {
    auto c = geometric_product(n);
    // sum of 2^i for i = 1..n is 2^{n+1} - 2
    EXPECT_EQ(c.degree_bound(1), (BigInt(1) << (n + 1)) - 2);
    // oracle cross-check: the bound matches the exact expanded degree, and
    // the expansion has 2^n monomials
    auto exp = expand_circuit(c, kOracleBudget);
    EXPECT_EQ(exp.support_size(), std::size_t(1) << n);
    BigInt max_deg = 0;
    for (const auto& [e, coeff] : exp.terms()) {
      if (e[0] > max_deg) max_deg = e[0];
    }
    EXPECT_EQ(c.degree_bound(1), max_deg);
  }
}

TEST(DegreeBound, NeverUnderestimates) {
  SplitMix64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    auto c = testutil::random_circuit(rng, RingSpec::integers(), 2, 5, 6, 4);
    ExplicitPoly exp(RingSpec::integers(), 2);
    try {
      exp = expand_circuit(c, kOracleBudget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    for (int var = 1; var <= 2; ++var) {
      BigInt true_deg = -1;
      for (const auto& [e, coeff] : exp.terms()) {
        if (e[static_cast<std::size_t>(var - 1)] > true_deg) {
          true_deg = e[static_cast<std::size_t>(var - 1)];
        }
      }
      if (sgn(true_deg) < 0) continue;  // zero polynomial
      EXPECT_GE(c.degree_bound(var), true_deg);
    }
  }
}

TEST(Kronecker, ForcedExamples) {
  // x1 * x2 with degree bounds (1,1): d = 2, image y^3
  {
    PowerfulSkewCircuit c(RingSpec::integers(), 2);
    c.add_input("u", zmono(2, 1, {1, 0}));
    c.add_input("v", zmono(2, 1, {0, 1}));
    c.add_mul("m", "u", "v");
    c.set_output("m");
    auto [d, uc] = kronecker_substitute(c);
    EXPECT_EQ(d, 2);
    auto exp = expand_circuit(uc, kOracleBudget);
    ASSERT_EQ(exp.support_size(), 1u);
    EXPECT_EQ(exp.terms().begin()->first[0], 3);
  }
  // prod_{i=1..k} x_i -> y^{2^k - 1}
  for (int k : {2, 3, 5, 8}) {
    PowerfulSkewCircuit c(RingSpec::integers(), k);
    std::string acc;
    for (int i = 1; i <= k; ++i) {
      std::vector<unsigned long> exps(static_cast<std::size_t>(k), 0);
      exps[static_cast<std::size_t>(i - 1)] = 1;
      const std::string in = "i" + std::to_string(i);
      c.add_input(in, zmono(k, 1, exps));
      if (acc.empty()) {
        acc = in;
      } else {
        const std::string m = "m" + std::to_string(i);
        c.add_mul(m, acc, in);
        acc = m;
      }
    }
    c.set_output(acc);
    auto [d, uc] = kronecker_substitute(c);
    auto exp = expand_circuit(uc, kOracleBudget);
    ASSERT_EQ(exp.support_size(), 1u);
    EXPECT_EQ(exp.terms().begin()->first[0], (BigInt(1) << k) - 1);
  }
}

TEST(Kronecker, PreservesZeroness) {
  SplitMix64 rng(515);
  int zero_seen = 0, nonzero_seen = 0;
  for (int i = 0; i < 80; ++i) {
    PowerfulSkewCircuit c =
        (i % 3 == 0)
            ? testutil::random_zero_circuit(rng, RingSpec::integers(), 3, 4, 5, 3)
            : testutil::random_circuit(rng, RingSpec::integers(), 3, 5, 5, 3);
    ExplicitPoly before(RingSpec::integers(), 3);
    try {
      before = expand_circuit(c, kOracleBudget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    auto [d, uc] = kronecker_substitute(c);
    auto after = expand_circuit(uc, kOracleBudget);
    EXPECT_EQ(before.is_zero(), after.is_zero());
    before.is_zero() ? ++zero_seen : ++nonzero_seen;
    EXPECT_TRUE(uc.validate().empty());  // skewness survives
  }
  EXPECT_GT(zero_seen, 3);
  EXPECT_GT(nonzero_seen, 3);
}

TEST(EvalMod, SyntacticCancellation) {
  // x^N + (-1)*x^N = 0 for any N and any context
  const RingSpec f5 = RingSpec::fp(5);
  PowerfulSkewCircuit c(f5, 1);
  SparsePolyBig big(f5, 1);
  big.add_term(1, {BigInt(1) << 70});
  c.add_input("u", big);
  SparsePolyBig neg(f5, 1);
  neg.add_term(-1, {BigInt(1) << 70});
  c.add_input("v", neg);
  c.add_add("s", "u", "v");
  c.set_output("s");
  auto ctx = build_test_modulus(3, {1, 0, 1}, 4, PrimeField(5));
  EXPECT_TRUE(eval_mod(c, ctx).is_zero());
}

TEST(EvalMod, ModulusItselfIsZero) {
  // A circuit computing exactly T evaluates to 0 mod T.
  PrimeField f7(7);
  auto ctx = build_test_modulus(3, {1, 1}, 3, f7);
  const RingSpec ring = RingSpec::fp(7);
  PowerfulSkewCircuit c(ring, 1);
  SparsePolyBig t_poly(ring, 1);
  for (std::size_t i = 0; i < ctx.modulus().coeffs().size(); ++i) {
    const std::uint64_t coeff = ctx.modulus().coeffs()[i];
    if (coeff) {
      t_poly.add_term(BigInt(static_cast<unsigned long>(coeff)),
                      {BigInt(static_cast<unsigned long>(i))});
    }
  }
  c.add_input("t", std::move(t_poly));
  c.set_output("t");
  EXPECT_TRUE(eval_mod(c, ctx).is_zero());
}

// Oracle: expand the circuit explicitly, then reduce the dense expansion
// mod T with poly_divrem.
DensePoly<PrimeField> expansion_mod_oracle(const PowerfulSkewCircuit& c,
                                           const ResidueCtx& ctx) {
  auto exp = expand_circuit(c, kOracleBudget);
  const PrimeField& f = ctx.field();
  std::vector<std::uint64_t> coeffs;
  for (const auto& [e, coeff] : exp.terms()) {
    const std::uint64_t deg = to_u64(e[0]);
    if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
    coeffs[deg] = f.reduce_big(coeff);
  }
  auto dense = DensePoly<PrimeField>::from_coeffs(f, std::move(coeffs));
  return poly_divrem(dense, ctx.modulus()).second;
}

TEST(EvalMod, MatchesExpansionOracle) {
  SplitMix64 rng(900);
  const std::uint64_t primes[] = {2, 3, 7, 13};
  for (int i = 0; i < 60; ++i) {
    const std::uint64_t p = primes[rng.next_below(4)];
    auto c = testutil::random_circuit(rng, RingSpec::fp(p), 1, 5,
                                      rng.next_below(1000000) + 1, p - 1);
    std::vector<std::uint8_t> b(rng.next_below(4) + 1);
    for (auto& bit : b) bit = rng.next_bit();
    std::uint64_t r = p == 3 ? 5 : 3;
    auto ctx = build_test_modulus(r, b, b.size() + rng.next_below(3), PrimeField(p));
    try {
      EXPECT_EQ(eval_mod(c, ctx), expansion_mod_oracle(c, ctx));
    } catch (const BudgetExceeded&) {
      continue;
    }
  }
}

TEST(EvalMod, DistributesOverGates) {
  // eval_mod of an Add gate is poly_add of the children; of a Mul gate the
  // reduced poly_mul.
  SplitMix64 rng(31);
  const RingSpec ring = RingSpec::fp(11);
  auto ctx = build_test_modulus(3, {1, 0}, 3, PrimeField(11));
  for (int i = 0; i < 20; ++i) {
    auto p1 = testutil::random_sparse(rng, ring, 1, 40, 10);
    auto p2 = testutil::random_sparse(rng, ring, 1, 40, 10);
    PowerfulSkewCircuit add_c(ring, 1), mul_c(ring, 1), l(ring, 1), r(ring, 1);
    for (auto* c : {&add_c, &mul_c, &l, &r}) {
      c->add_input("a", p1);
      c->add_input("b", p2);
    }
    add_c.add_add("g", "a", "b");
    add_c.set_output("g");
    mul_c.add_mul("g", "a", "b");
    mul_c.set_output("g");
    l.set_output("a");
    r.set_output("b");
    const auto va = eval_mod(l, ctx), vb = eval_mod(r, ctx);
    EXPECT_EQ(eval_mod(add_c, ctx), poly_add(va, vb));
    EXPECT_EQ(eval_mod(mul_c, ctx), ctx.mul(va, vb));
  }
}

TEST(CircuitToBp, InputOnlyCircuit) {
  PowerfulSkewCircuit c(RingSpec::integers(), 1);
  c.add_input("i", zmono(1, 5, {9}));
  c.set_output("i");
  auto bp = circuit_to_bp(c);
  EXPECT_EQ(bp.nodes().size(), 2u);
  ASSERT_EQ(bp.edges().size(), 1u);
  EXPECT_EQ(bp.edges().begin()->second, zmono(1, 5, {9}));
}

TEST(BpToCircuit, ParallelEdgesGiveXPlusOne) {
  // Two parallel s -> t edges labelled x and 1; parallel labels merge, and
  // the circuit computes x + 1.
  PowerfulBP bp(RingSpec::integers(), 1);
  bp.add_node("s");
  bp.add_node("t");
  bp.add_edge("s", "t", zmono(1, 1, {1}));
  bp.add_edge("s", "t", SparsePolyBig::constant(RingSpec::integers(), 1, 1));
  bp.set_source("s");
  bp.set_sink("t");
  auto c = bp_to_circuit(bp);
  EXPECT_TRUE(c.validate().empty());
  auto exp = expand_circuit(c, kOracleBudget);
  ExplicitPoly want(RingSpec::integers(), 1);
  want.add_term({BigInt(1)}, 1);
  want.add_term({BigInt(0)}, 1);
  EXPECT_EQ(exp, want);
}

TEST(BpRoundTrip, PreservesValue) {
  SplitMix64 rng(777);
  for (int i = 0; i < 50; ++i) {
    auto c = testutil::random_circuit(rng, RingSpec::integers(), 2, 5, 5, 4);
    ExplicitPoly direct(RingSpec::integers(), 2);
    try {
      direct = expand_circuit(c, kOracleBudget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    auto back = bp_to_circuit(circuit_to_bp(c));
    EXPECT_TRUE(back.validate().empty());
    EXPECT_EQ(expand_circuit(back, kOracleBudget), direct);
  }
}

TEST(BpEval, TwoNodeExample) {
  PowerfulBP bp(RingSpec::fp(5), 1);
  bp.add_edge("s", "t", SparsePolyBig::monomial(RingSpec::fp(5), 1, 1, {BigInt(1)}));
  bp.set_source("s");
  bp.set_sink("t");
  auto ctx = build_test_modulus(3, {1}, 2, PrimeField(5));
  XPowerCache cache(ctx);
  ResidueSemiring sem{&ctx};
  auto to_value = [&cache](const SparsePolyBig& p) {
    return residue_of_sparse(p, cache);
  };
  auto x = DensePoly<PrimeField>::monomial(PrimeField(5), 1, 1);
  EXPECT_EQ(bp_eval_topo(bp, sem, to_value), x);
  EXPECT_EQ(bp_eval_matrix(bp, sem, to_value), x);
}

TEST(BpEval, NoPathGivesZero) {
  PowerfulBP bp(RingSpec::fp(5), 1);
  bp.add_node("s");
  bp.add_node("t");
  bp.add_node("u");
  bp.add_edge("s", "u", SparsePolyBig::constant(RingSpec::fp(5), 1, 1));
  bp.set_source("s");
  bp.set_sink("t");
  auto ctx = build_test_modulus(3, {1}, 2, PrimeField(5));
  XPowerCache cache(ctx);
  ResidueSemiring sem{&ctx};
  auto to_value = [&cache](const SparsePolyBig& p) {
    return residue_of_sparse(p, cache);
  };
  EXPECT_TRUE(bp_eval_topo(bp, sem, to_value).is_zero());
  EXPECT_TRUE(bp_eval_matrix(bp, sem, to_value).is_zero());
}

TEST(BpEval, MatrixMatchesTopoOnRandomBps) {
  SplitMix64 rng(4242);
  for (int i = 0; i < 200; ++i) {
    // random DAG with <= 8 nodes, edges respecting node order
    const std::size_t n = rng.next_below(7) + 2;
    PowerfulBP bp(RingSpec::fp(7), 1);
    std::vector<std::string> names;
    for (std::size_t v = 0; v < n; ++v) {
      names.push_back("n" + std::to_string(v));
      bp.add_node(names.back());
    }
    const std::size_t edges = rng.next_below(2 * n) + 1;
    for (std::size_t e = 0; e < edges; ++e) {
      std::size_t u = rng.next_below(n - 1);
      std::size_t v = u + 1 + rng.next_below(n - u - 1);
      bp.add_edge(names[u], names[v],
                  testutil::random_sparse(rng, RingSpec::fp(7), 1, 30, 6));
    }
    bp.set_source(names[0]);
    bp.set_sink(names[n - 1]);
    auto ctx = build_test_modulus(3, {1, 1}, 2 + rng.next_below(3), PrimeField(7));
    XPowerCache cache(ctx);
    ResidueSemiring sem{&ctx};
    auto to_value = [&cache](const SparsePolyBig& p) {
      return residue_of_sparse(p, cache);
    };
    EXPECT_EQ(bp_eval_topo(bp, sem, to_value), bp_eval_matrix(bp, sem, to_value));
  }
}

TEST(EvalPipeline, TopoMatchesMatrixAfterConversion) {
  // topological eval_mod == matrix evaluation of the converted BP
  SplitMix64 rng(606);
  for (int i = 0; i < 40; ++i) {
    auto c = testutil::random_circuit(rng, RingSpec::fp(5), 1, 4, 200, 4);
    auto ctx = build_test_modulus(3, {1, 0, 1}, 3 + rng.next_below(2), PrimeField(5));
    auto bp = circuit_to_bp(c);
    XPowerCache cache(ctx);
    ResidueSemiring sem{&ctx};
    auto to_value = [&cache](const SparsePolyBig& p) {
      return residue_of_sparse(p, cache);
    };
    EXPECT_EQ(eval_mod(c, ctx), bp_eval_matrix(bp, sem, to_value));
  }
}

}  // namespace
}  // namespace pskew
