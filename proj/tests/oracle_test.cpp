#include <gtest/gtest.h>

#include "pskew/oracle.hpp"
#include "test_util.hpp"

namespace pskew {
namespace {

TEST(ExpandCircuit, Examples) {
  const RingSpec z = RingSpec::integers();
  {
    PowerfulSkewCircuit c(z, 1);
    c.add_input("i", SparsePolyBig::monomial(z, 1, 3, {BigInt(2)}));
    c.set_output("i");
    auto exp = expand_circuit(c, 100);
    ExplicitPoly want(z, 1);
    want.add_term({BigInt(2)}, 3);
    EXPECT_EQ(exp, want);
  }
  {
    PowerfulSkewCircuit c(z, 1);
    SparsePolyBig u(z, 1), v(z, 1);
    u.add_term(1, {BigInt(1)});
    u.add_term(1, {BigInt(0)});
    v.add_term(1, {BigInt(1)});
    v.add_term(-1, {BigInt(0)});
    c.add_input("u", u);
    c.add_input("v", v);
    c.add_mul("m", "u", "v");
    c.set_output("m");
    auto exp = expand_circuit(c, 100);
    ExplicitPoly want(z, 1);
    want.add_term({BigInt(2)}, 1);
    want.add_term({BigInt(0)}, -1);
    EXPECT_EQ(exp, want);
  }
}

TEST(ExpandCircuit, GeometricFamilyHas32Monomials) {
  const RingSpec z = RingSpec::integers();
  PowerfulSkewCircuit c(z, 1);
  std::string acc;
  for (int i = 1; i <= 5; ++i) {
    SparsePolyBig p(z, 1);
    p.add_term(1, {BigInt(1) << i});
    p.add_term(1, {BigInt(0)});
    const std::string in = "f" + std::to_string(i);
    c.add_input(in, p);
    if (acc.empty()) {
      acc = in;
    } else {
      c.add_mul("m" + std::to_string(i), acc, in);
      acc = "m" + std::to_string(i);
    }
  }
  c.set_output(acc);
  EXPECT_EQ(expand_circuit(c, 100).support_size(), 32u);
  EXPECT_THROW(expand_circuit(c, 31), BudgetExceeded);
}

TEST(ExpandCircuit, GateHomomorphism) {
  // expansion of Add/Mul gates equals map-level sum/convolution of the
  // operand expansions
  SplitMix64 rng(5150);
  const RingSpec ring = RingSpec::integers();
  for (int i = 0; i < 25; ++i) {
    auto p1 = testutil::random_sparse(rng, ring, 2, 12, 8);
    auto p2 = testutil::random_sparse(rng, ring, 2, 12, 8);
    PowerfulSkewCircuit add_c(ring, 2), mul_c(ring, 2);
    for (auto* c : {&add_c, &mul_c}) {
      c->add_input("a", p1);
      c->add_input("b", p2);
    }
    add_c.add_add("g", "a", "b");
    add_c.set_output("g");
    mul_c.add_mul("g", "a", "b");
    mul_c.set_output("g");
    const auto ea = ExplicitPoly::from_sparse(p1);
    const auto eb = ExplicitPoly::from_sparse(p2);
    EXPECT_EQ(expand_circuit(add_c, 10000), explicit_add(ea, eb, 10000));
    EXPECT_EQ(expand_circuit(mul_c, 10000), explicit_mul(ea, eb, 10000));
  }
}

WreathElem random_elem(SplitMix64& rng, const GroupSpec& spec) {
  WreathElem e = wreath_identity(spec);
  const std::size_t n = rng.next_below(4);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<BigInt> at;
    for (std::uint32_t d = 0; d < spec.cursor_rank; ++d) {
      at.emplace_back(static_cast<long>(rng.next_below(7)) - 3);
    }
    for (std::size_t f = 0; f < spec.factors.size(); ++f) {
      detail::wreath_deposit(e, at, f,
                             BigInt(static_cast<long>(rng.next_below(9)) - 4),
                             spec);
    }
  }
  for (std::uint32_t d = 0; d < spec.cursor_rank; ++d) {
    e.cursor[d] = static_cast<long>(rng.next_below(9)) - 4;
  }
  return e;
}

TEST(WreathMul, IdentityIsNeutral) {
  SplitMix64 rng(2);
  auto spec = GroupSpec::parse("ZxZ_3 wr Z^2");
  for (int i = 0; i < 15; ++i) {
    auto u = random_elem(rng, spec);
    auto id = wreath_identity(spec);
    EXPECT_EQ(wreath_mul(u, id, spec).support, u.support);
    EXPECT_EQ(wreath_mul(u, id, spec).cursor, u.cursor);
    EXPECT_EQ(wreath_mul(id, u, spec).support, u.support);
  }
}

TEST(WreathMul, NonCommutative) {
  auto spec = GroupSpec::parse("Z wr Z");
  auto t = simulate_word({"t"}, spec, 10);
  auto a = simulate_word({"a"}, spec, 10);
  auto ta = wreath_mul(t, a, spec);
  auto at = wreath_mul(a, t, spec);
  // t then a: deposit at 0; a then t: deposit at 1
  EXPECT_NE(ta.support, at.support);
}

TEST(WreathMul, Associativity) {
  SplitMix64 rng(77);
  const char* specs[] = {"Z wr Z", "Z_2 wr Z", "ZxZ_5 wr Z^2"};
  for (int i = 0; i < 100; ++i) {
    auto spec = GroupSpec::parse(specs[i % 3]);
    auto u = random_elem(rng, spec);
    auto v = random_elem(rng, spec);
    auto w = random_elem(rng, spec);
    auto left = wreath_mul(wreath_mul(u, v, spec), w, spec);
    auto right = wreath_mul(u, wreath_mul(v, w, spec), spec);
    EXPECT_EQ(left.support, right.support);
    EXPECT_EQ(left.cursor, right.cursor);
  }
}

TEST(SimulateWord, Examples) {
  auto spec = GroupSpec::parse("Z wr Z");
  EXPECT_TRUE(is_identity(simulate_word({"t", "T"}, spec, 10)));

  // a t A T: +1 at position 1, -1 at position 0, cursor back at 0
  auto e = simulate_word({"a", "t", "A", "T"}, spec, 10);
  EXPECT_EQ(e.cursor, std::vector<BigInt>{BigInt(0)});
  ASSERT_EQ(e.support.size(), 2u);
  EXPECT_EQ(e.support.at({BigInt(1)}), std::vector<BigInt>{BigInt(1)});
  EXPECT_EQ(e.support.at({BigInt(0)}), std::vector<BigInt>{BigInt(-1)});

  // t^p in Z_p wr Z
  for (std::uint64_t p : {2, 3, 5}) {
    auto zp = GroupSpec::parse("Z_" + std::to_string(p) + " wr Z");
    std::vector<std::string> word(p, "t");
    EXPECT_TRUE(is_identity(simulate_word(word, zp, 10)));
  }
}

TEST(SimulateWord, ConcatenationIsMultiplication) {
  SplitMix64 rng(10101);
  auto spec = GroupSpec::parse("ZxZ_2 wr Z^2");
  std::vector<std::string> gens = {"a1", "A1", "a2", "A2", "g1", "G1", "g2", "G2"};
  for (int i = 0; i < 30; ++i) {
    std::vector<std::string> u, v;
    for (std::size_t j = 0; j < rng.next_below(12) + 1; ++j) {
      u.push_back(gens[rng.next_below(gens.size())]);
    }
    for (std::size_t j = 0; j < rng.next_below(12) + 1; ++j) {
      v.push_back(gens[rng.next_below(gens.size())]);
    }
    std::vector<std::string> uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    auto su = simulate_word(u, spec, 1000);
    auto sv = simulate_word(v, spec, 1000);
    auto suv = simulate_word(uv, spec, 1000);
    auto prod = wreath_mul(su, sv, spec);
    EXPECT_EQ(suv.support, prod.support);
    EXPECT_EQ(suv.cursor, prod.cursor);
  }
}

TEST(SimulateWord, BudgetEnforced) {
  auto spec = GroupSpec::parse("Z wr Z");
  std::vector<std::string> word(100, "a");
  EXPECT_THROW(simulate_word(word, spec, 99), BudgetExceeded);
}

TEST(SimulateWord, FMatchesPwRecurrence) {
  // For positive words over {a, A, t, T}, the support read off the
  // simulation is exactly the coefficient map of p_w.
  SplitMix64 rng(888);
  auto spec = GroupSpec::parse("Z wr Z");
  const char syms[] = {'a', 'A', 't', 'T'};
  int checked = 0;
  for (int i = 0; i < 120 && checked < 40; ++i) {
    std::string w;
    for (std::size_t j = 0; j < rng.next_below(24) + 1; ++j) {
      w += syms[rng.next_below(4)];
    }
    // keep only positive words: every prefix before a deposit has Delta >= 0
    BigInt delta = 0;
    bool positive = true;
    ExplicitPoly expected(RingSpec::integers(), 1);
    for (char ch : w) {
      if (ch == 'a') ++delta;
      else if (ch == 'A') --delta;
      else {
        if (sgn(delta) < 0) {
          positive = false;
          break;
        }
        expected.add_term({delta}, ch == 't' ? 1 : -1);
      }
    }
    if (!positive) continue;
    ++checked;
    std::vector<std::string> toks;
    for (char ch : w) {
      toks.push_back(ch == 'a' ? "a" : ch == 'A' ? "A" : ch == 't' ? "g1" : "G1");
    }
    auto sim = simulate_word(toks, spec, 1000);
    ExplicitPoly from_sim(RingSpec::integers(), 1);
    for (const auto& [at, vals] : sim.support) {
      from_sim.add_term(at, vals[0]);
    }
    EXPECT_EQ(from_sim, expected) << w;
  }
  EXPECT_GE(checked, 20);
}

}  // namespace
}  // namespace pskew
