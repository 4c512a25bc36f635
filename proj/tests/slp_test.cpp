#include <gtest/gtest.h>

#include "pskew/oracle.hpp"
#include "pskew/slp.hpp"
#include "test_util.hpp"

namespace pskew {
namespace {

const BigInt kCellBudget = 200000;

NdSLP doubling_chain(int m) {
  NdSLP s(1, {"a"});
  s.add_terminal("A0", "a");
  for (int i = 1; i <= m; ++i) {
    s.add_concat("A" + std::to_string(i), "A" + std::to_string(i - 1), 1,
                 "A" + std::to_string(i - 1));
  }
  s.set_start("A" + std::to_string(m));
  return s;
}

TEST(Lengths, Examples) {
  {
    NdSLP s(1, {"a"});
    s.add_terminal("A", "a");
    s.add_concat("S", "A", 1, "A");
    s.set_start("S");
    EXPECT_EQ(slp_lengths(s).at("S")[0], 2);
  }
  // balanced doubling: length 2^m from m concatenations
  for (int m : {5, 40, 100}) {
    auto s = doubling_chain(m);
    EXPECT_EQ(slp_lengths(s).at(s.start())[0], BigInt(1) << m);
  }
}

TEST(Lengths, MismatchNamesTheVariable) {
  NdSLP s(2, {"a"});
  s.add_terminal("A", "a");
  s.add_concat("W", "A", 2, "A");   // 1 x 2
  s.add_concat("BAD", "A", 1, "W");  // axis-2 lengths 1 vs 2
  s.set_start("BAD");
  try {
    slp_lengths(s);
    FAIL() << "expected a mismatch";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("BAD"), std::string::npos);
  }
}

TEST(Expand, OneDimensional) {
  NdSLP s(1, {"a"});
  s.add_terminal("A", "a");
  s.add_concat("S", "A", 1, "A");
  s.set_start("S");
  auto pic = slp_expand(s, kCellBudget);
  EXPECT_EQ(pic.extents, (std::vector<std::uint64_t>{2}));
  EXPECT_EQ(pic.symbol_at({1}), "a");
  EXPECT_EQ(pic.symbol_at({2}), "a");
}

TEST(Expand, TwoByTwoMatchesConcatSemantics) {
  // rows "ab" and "cd" stacked along axis 1:
  //   p(1,1)=a p(1,2)=b p(2,1)=c p(2,2)=d
  NdSLP s(2, {"a", "b", "c", "d"});
  for (const char* sym : {"a", "b", "c", "d"}) {
    s.add_terminal(std::string("T") + sym, sym);
  }
  s.add_concat("R1", "Ta", 2, "Tb");
  s.add_concat("R2", "Tc", 2, "Td");
  s.add_concat("S", "R1", 1, "R2");
  s.set_start("S");
  auto pic = slp_expand(s, kCellBudget);
  EXPECT_EQ(pic.extents, (std::vector<std::uint64_t>{2, 2}));
  EXPECT_EQ(pic.symbol_at({1, 1}), "a");
  EXPECT_EQ(pic.symbol_at({1, 2}), "b");
  EXPECT_EQ(pic.symbol_at({2, 1}), "c");
  EXPECT_EQ(pic.symbol_at({2, 2}), "d");
}

TEST(Expand, BudgetZeroFails) {
  NdSLP s(1, {"a"});
  s.add_terminal("A", "a");
  s.set_start("A");
  EXPECT_THROW(slp_expand(s, 0), BudgetExceeded);
}

TEST(Expand, LengthsMatchExtents) {
  SplitMix64 rng(606);
  for (int i = 0; i < 30; ++i) {
    auto s = testutil::random_slp(rng, 2, {"a", "b"}, 6);
    auto lens = slp_lengths(s).at(s.start());
    Picture pic;
    try {
      pic = slp_expand(s, kCellBudget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    for (int j = 0; j < 2; ++j) {
      EXPECT_EQ(lens[static_cast<std::size_t>(j)],
                BigInt(static_cast<unsigned long>(pic.extents[static_cast<std::size_t>(j)])));
    }
  }
}

TEST(EncodeBinary, TwoSymbolCodes) {
  // {a, b}: a -> 01, b -> 00
  NdSLP s(1, {"a", "b"});
  s.add_terminal("A", "a");
  s.add_terminal("B", "b");
  s.add_concat("S", "A", 1, "B");
  s.set_start("S");
  auto enc = encode_binary(s);
  auto pic = slp_expand(enc, kCellBudget);
  ASSERT_EQ(pic.extents, (std::vector<std::uint64_t>{4}));
  std::string word;
  for (auto c : pic.cells) word += enc.alphabet()[static_cast<std::size_t>(c)];
  EXPECT_EQ(word, "0100");
}

TEST(EncodeBinary, SingletonBecomesWidthKRow) {
  NdSLP s(2, {"a", "b", "c"});
  s.add_terminal("A", "b");
  s.set_start("A");
  auto enc = encode_binary(s);
  auto pic = slp_expand(enc, kCellBudget);
  // width k = 3 along axis 1, the other axis stays 1
  EXPECT_EQ(pic.extents, (std::vector<std::uint64_t>{3, 1}));
  std::string col;
  for (auto c : pic.cells) col += enc.alphabet()[static_cast<std::size_t>(c)];
  EXPECT_EQ(col, "001");  // b = a_2 -> 0^2 1^1
}

TEST(EncodeBinary, PreservesEqualityAndInequality) {
  SplitMix64 rng(99);
  for (int i = 0; i < 25; ++i) {
    auto s1 = testutil::random_slp(rng, 1, {"a", "b", "c"}, 7);
    Picture p1;
    try {
      p1 = slp_expand(s1, kCellBudget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    auto s2 = testutil::slp_from_picture(p1);
    // same picture, different parse: encodings must stay equal
    auto e1 = slp_expand(encode_binary(s1), kCellBudget);
    auto e2 = slp_expand(encode_binary(s2), kCellBudget);
    EXPECT_TRUE(e1.same_picture(e2));
  }
  // inequality preserved
  NdSLP u(1, {"a", "b"}), v(1, {"a", "b"});
  u.add_terminal("A", "a");
  u.set_start("A");
  v.add_terminal("B", "b");
  v.set_start("B");
  auto eu = slp_expand(encode_binary(u), kCellBudget);
  auto ev = slp_expand(encode_binary(v), kCellBudget);
  EXPECT_FALSE(eu.same_picture(ev));
}

NdSLP word_slp(const std::string& word) {
  NdSLP s(1, {"0", "1"});
  s.add_terminal("Z", "0");
  s.add_terminal("O", "1");
  std::string acc = word[0] == '0' ? "Z" : "O";
  for (std::size_t i = 1; i < word.size(); ++i) {
    std::string v = "W" + std::to_string(i);
    s.add_concat(v, acc, 1, word[i] == '0' ? "Z" : "O");
    acc = v;
  }
  s.set_start(acc);
  return s;
}

TEST(ToPolyCircuit, IdenticalSlpsCancel) {
  auto s = word_slp("0110");
  auto c = to_poly_circuit(s, s);
  EXPECT_TRUE(c.validate().empty());
  EXPECT_TRUE(expand_circuit(c, 10000).is_zero());
}

TEST(ToPolyCircuit, SameWordDifferentParsesCancel) {
  auto s1 = word_slp("0101");
  // right-leaning parse of the same word
  NdSLP s2(1, {"0", "1"});
  s2.add_terminal("Z", "0");
  s2.add_terminal("O", "1");
  s2.add_concat("C1", "Z", 1, "O");   // 01
  s2.add_concat("C2", "C1", 1, "C1");  // 0101
  s2.set_start("C2");
  auto c = to_poly_circuit(s1, s2);
  EXPECT_TRUE(expand_circuit(c, 10000).is_zero());
}

TEST(ToPolyCircuit, ZeroOneVersusOneZero) {
  // f_{01} = x, f_{10} = 1; the sum over F_2 is x + 1.
  auto c = to_poly_circuit(word_slp("01"), word_slp("10"));
  auto exp = expand_circuit(c, 10000);
  ExplicitPoly want(RingSpec::fp(2), 1);
  want.add_term({BigInt(1)}, 1);
  want.add_term({BigInt(0)}, 1);
  EXPECT_EQ(exp, want);
}

TEST(PictureF, ConcatLinearity) {
  // f_{p o_i q} = f_p + x_i^{|p|_i} f_q
  SplitMix64 rng(2121);
  for (int i = 0; i < 25; ++i) {
    auto s = testutil::random_slp(rng, 2, {"0", "1"}, 6);
    // find a concat rule to split on
    const auto& start_rule = s.rule(s.start());
    if (start_rule.terminal) continue;
    Picture whole, left, right;
    try {
      whole = slp_expand(s, kCellBudget);
      NdSLP ls = s, rs = s;
      ls.set_start(start_rule.left);
      rs.set_start(start_rule.right);
      left = slp_expand(ls, kCellBudget);
      right = slp_expand(rs, kCellBudget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    auto f_whole = testutil::picture_f(whole);
    auto f_left = testutil::picture_f(left);
    auto f_right = testutil::picture_f(right);
    // shift the right side by |left| along the concat axis
    ExplicitPoly shifted(RingSpec::fp(2), 2);
    const std::size_t ax = static_cast<std::size_t>(start_rule.axis - 1);
    for (const auto& [e, coeff] : f_right.terms()) {
      auto e2 = e;
      e2[ax] += left.extents[ax];
      shifted.add_term(e2, coeff);
    }
    EXPECT_EQ(f_whole, explicit_add(f_left, shifted, 1u << 20));
  }
}

TEST(SlpEqual, IdenticalAreEqual) {
  auto s = word_slp("011010");
  PitParams params;
  params.trials = 10;
  auto res = slp_equal(s, s, params);
  EXPECT_TRUE(res.equal);
  EXPECT_FALSE(res.length_mismatch);
}

TEST(SlpEqual, LengthMismatchShortCircuits) {
  // a^(2^m) vs a^(2^m) a: already the length check fails
  auto s1 = doubling_chain(10);
  NdSLP s2(1, {"a"});
  s2.add_terminal("A0", "a");
  for (int i = 1; i <= 10; ++i) {
    s2.add_concat("A" + std::to_string(i), "A" + std::to_string(i - 1), 1,
                  "A" + std::to_string(i - 1));
  }
  s2.add_concat("S", "A10", 1, "A0");
  s2.set_start("S");
  PitParams params;
  auto res = slp_equal(s1, s2, params);
  EXPECT_FALSE(res.equal);
  EXPECT_TRUE(res.length_mismatch);
  EXPECT_FALSE(res.pit.has_value());
}

TEST(SlpEqual, MismatchedAlphabetOrDimRejected) {
  NdSLP a(1, {"a"}), b(1, {"b"}), c(2, {"a"});
  a.add_terminal("A", "a");
  a.set_start("A");
  b.add_terminal("B", "b");
  b.set_start("B");
  c.add_terminal("C", "a");
  c.set_start("C");
  PitParams params;
  EXPECT_THROW(slp_equal(a, b, params), std::invalid_argument);
  EXPECT_THROW(slp_equal(a, c, params), std::invalid_argument);
}

TEST(SlpEqual, MatchesExpansionComparison) {
  SplitMix64 rng(31337);
  PitParams params;
  params.trials = 40;
  int equal_seen = 0, unequal_seen = 0;
  for (int i = 0; i < 40; ++i) {
    const int dim = 1 + static_cast<int>(rng.next_below(2));
    auto s1 = testutil::random_slp(rng, dim, {"a", "b"}, 6);
    Picture p1;
    try {
      p1 = slp_expand(s1, kCellBudget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    NdSLP s2(1, {"a"});
    switch (rng.next_below(3)) {
      case 0:
        s2 = testutil::slp_from_picture(p1);  // equal, remixed parse
        break;
      case 1: {
        Picture flipped = p1;  // flip one cell
        const std::size_t cell = rng.next_below(flipped.cells.size());
        flipped.cells[cell] = flipped.cells[cell] == 0 ? 1 : 0;
        s2 = testutil::slp_from_picture(flipped);
        break;
      }
      default:
        s2 = testutil::random_slp(rng, dim, {"a", "b"}, 6);
        break;
    }
    Picture p2;
    try {
      p2 = slp_expand(s2, kCellBudget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    params.seed = static_cast<std::uint64_t>(i);
    const auto res = slp_equal(s1, s2, params);
    const bool truly_equal = p1.same_picture(p2);
    EXPECT_EQ(res.equal, truly_equal) << "instance " << i;
    truly_equal ? ++equal_seen : ++unequal_seen;
  }
  EXPECT_GT(equal_seen, 3);
  EXPECT_GT(unequal_seen, 3);
}

TEST(SlpParse, RoundTrip) {
  const std::string text =
      "DIM 2\n"
      "ALPHABET a b\n"
      "A -> 'a'\n"
      "B -> 'b'\n"
      "R -> A .2 B\n"
      "S -> R .1 R\n"
      "START S\n";
  auto s = parse_slp(text);
  EXPECT_EQ(print_slp(s), text);
  EXPECT_TRUE(s.validate().empty());
  auto again = parse_slp(print_slp(s));
  EXPECT_TRUE(slp_expand(s, kCellBudget).same_picture(slp_expand(again, kCellBudget)));
}

TEST(SlpParse, Diagnostics) {
  try {
    parse_slp("DIM 1\nALPHABET a\nA -> \nSTART A\n");
    FAIL() << "expected parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_slp("ALPHABET a\nA -> 'a'\nSTART A\n"), ParseError);
  EXPECT_THROW(parse_slp("DIM 1\nALPHABET a\nA -> B .5 C\nSTART A\n"), ParseError);
}

TEST(Validate, EmptyPicturesImpossible) {
  // terminals force every axis length >= 1; an SLP with no variables is
  // rejected outright
  NdSLP s(1, {"a"});
  auto diags = s.validate();
  EXPECT_FALSE(diags.empty());
}

}  // namespace
}  // namespace pskew
