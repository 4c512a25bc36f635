#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pskew/bigint.hpp"
#include "pskew/circuit.hpp"
#include "pskew/group.hpp"
#include "pskew/pit.hpp"
#include "pskew/slp.hpp"
#include "pskew/sparse_poly.hpp"

namespace pskew {

namespace detail {

inline int word_symbol_kind(const std::string& sym) {
  if (sym == "a") return 0;
  if (sym == "A") return 1;
  if (sym == "t") return 2;
  if (sym == "T") return 3;
  throw std::invalid_argument("word SLP symbol must be one of a, A, t, T (got '" +
                              sym + "')");
}

// Incrementally builds a 1-dimensional SLP over {a, A, t, T}. Generated
// variables are prefixed '@w'; powers are realized by shared doubling
// chains, so a^n costs O(bitlen n) variables.
class WordSlpBuilder {
 public:
  WordSlpBuilder() : slp_(1, {"a", "A", "t", "T"}) {}

  NdSLP&& take() { return std::move(slp_); }
  NdSLP& slp() { return slp_; }

  std::string fresh() { return "@w" + std::to_string(counter_++); }

  std::string terminal(int kind) {
    static const char* symbols[4] = {"a", "A", "t", "T"};
    std::string& slot = term_[kind];
    if (slot.empty()) {
      slot = fresh();
      slp_.add_terminal(slot, symbols[kind]);
    }
    return slot;
  }

  std::string concat(const std::string& l, const std::string& r) {
    std::string v = fresh();
    slp_.add_concat(v, l, 1, r);
    return v;
  }

  // base^e for e >= 1 via binary doubling on shared square chains.
  std::string pow(const std::string& base, const BigInt& e) {
    if (sgn(e) <= 0) throw std::logic_error("WordSlpBuilder::pow: need e >= 1");
    auto& sq = squares_[base];
    if (sq.empty()) sq.push_back(base);
    const std::size_t bits = bit_length(e);
    while (sq.size() < bits) sq.push_back(concat(sq.back(), sq.back()));
    std::string acc;
    for (std::size_t j = 0; j < bits; ++j) {
      if (!bit_test(e, j)) continue;
      acc = acc.empty() ? sq[j] : concat(acc, sq[j]);
    }
    return acc;
  }

  // A word for the group identity with p = 0: "a A". SLP rules cannot be
  // empty, so this stands in for the empty word.
  std::string pad() {
    if (pad_.empty()) pad_ = concat(terminal(0), terminal(1));
    return pad_;
  }

 private:
  NdSLP slp_;
  std::size_t counter_ = 0;
  std::string term_[4];
  std::string pad_;
  std::map<std::string, std::vector<std::string>> squares_;
};

}  // namespace detail

// Delta(val(w)) = |w|_a - |w|_{a^-1}: the cursor displacement, evaluated
// bottom-up as an additive circuit.
inline BigInt word_delta(const NdSLP& w) {
  w.require_valid();
  if (w.dim() != 1) throw std::invalid_argument("word_delta: SLP must be 1-dim");
  const auto order = w.topological_order();
  std::vector<BigInt> d(w.var_count());
  for (std::size_t idx : order) {
    const auto& r = w.var_at(idx).second;
    if (r.terminal) {
      const int kind =
          detail::word_symbol_kind(w.alphabet()[static_cast<std::size_t>(r.symbol)]);
      d[idx] = kind == 0 ? 1 : kind == 1 ? -1 : 0;
    } else {
      d[idx] = d[w.index_of(r.left)] + d[w.index_of(r.right)];
    }
  }
  return d[w.index_of(w.start())];
}

struct WordCircuit {
  PowerfulSkewCircuit circuit;  // univariate over Z, val = p_w for the
                                // conjugated word a^k val a^-k
  BigInt delta;                 // Delta(val(w))
  BigInt conj_shift;            // k = |val(w)|
};

// The SLP -> circuit reduction for Z wr Z. Step 1 conjugates every t-rule
// into a^k t^d a^-k (implicitly, via the stats), making all values positive,
// and computes Delta, the t-prefix minima m_A (with min over the empty set
// being 0) and the occurrence flags bottom-up. Step 2 emits gates for the
// quotients q_A with p_A = x^{m_A} q_A; the output multiplies the start
// quotient back by x^{m_S}. val(w) = 1 in Z wr Z iff val(circuit) = 0 and
// Delta = 0.
inline WordCircuit slp_to_circuit(const NdSLP& w) {
  w.require_valid();
  if (w.dim() != 1) {
    throw std::invalid_argument("slp_to_circuit: SLP must be 1-dimensional");
  }
  const RingSpec ring = RingSpec::integers();
  const auto lengths = slp_lengths(w);
  const BigInt conj = lengths.at(w.start())[0];

  PowerfulSkewCircuit c(ring, 1);
  c.add_input("@zero", SparsePolyBig::zero(ring, 1));
  c.add_input("@pos", SparsePolyBig::constant(ring, 1, 1));
  c.add_input("@neg", SparsePolyBig::constant(ring, 1, -1));
  std::size_t counter = 0;
  auto fresh = [&counter](const char* stem) {
    return std::string("@") + stem + std::to_string(counter++);
  };
  auto shifted = [&](const std::string& g, const BigInt& e) -> std::string {
    if (sgn(e) == 0) return g;
    const std::string xin = fresh("x");
    c.add_input(xin, SparsePolyBig::monomial(ring, 1, 1, {e}));
    const std::string mg = fresh("m");
    c.add_mul(mg, xin, g);
    return mg;
  };

  const auto order = w.topological_order();
  std::vector<BigInt> d(w.var_count()), m(w.var_count());
  std::vector<char> alpha(w.var_count(), 0);
  std::vector<std::string> gate(w.var_count());
  for (std::size_t idx : order) {
    const auto& r = w.var_at(idx).second;
    if (r.terminal) {
      const int kind =
          detail::word_symbol_kind(w.alphabet()[static_cast<std::size_t>(r.symbol)]);
      switch (kind) {
        case 0:  // a
          d[idx] = 1;
          m[idx] = 0;
          gate[idx] = "@zero";
          break;
        case 1:  // a^-1
          d[idx] = -1;
          m[idx] = 0;
          gate[idx] = "@zero";
          break;
        case 2:  // t, conjugated: a^k t a^-k
          d[idx] = 0;
          m[idx] = conj;
          alpha[idx] = 1;
          gate[idx] = "@pos";
          break;
        default:  // t^-1
          d[idx] = 0;
          m[idx] = conj;
          alpha[idx] = 1;
          gate[idx] = "@neg";
          break;
      }
      continue;
    }
    const std::size_t li = w.index_of(r.left), ri = w.index_of(r.right);
    d[idx] = d[li] + d[ri];
    alpha[idx] = alpha[li] || alpha[ri];
    if (!alpha[ri]) {
      m[idx] = m[li];
      gate[idx] = gate[li];
      continue;
    }
    const BigInt via_right = d[li] + m[ri];
    m[idx] = std::min(m[li], via_right);
    const std::string tb = shifted(gate[li], m[li] - m[idx]);
    const std::string tc = shifted(gate[ri], via_right - m[idx]);
    const std::string g = fresh("q");
    c.add_add(g, tb, tc);
    gate[idx] = g;
  }

  const std::size_t si = w.index_of(w.start());
  c.set_output(shifted(gate[si], m[si]));
  return WordCircuit{std::move(c), d[si], conj};
}

// The circuit -> SLP reduction. Every gate gets a well-formed word variable
// and a primed twin computing the negated polynomial:
//   input b*x^n        ->  a^n t^b a^-n  (pad word "a A" when the
//                          polynomial has no terms)
//   B + C              ->  B C
//   B x (b*x^n input)  ->  a^n B^b a^-n, with B^-b = (B')^b
// Multi-term input gates distribute into concatenations of monomial words.
inline NdSLP circuit_to_wordslp(const PowerfulSkewCircuit& c) {
  c.require_valid();
  if (c.num_vars() != 1) {
    throw std::invalid_argument("circuit_to_wordslp: circuit must be univariate");
  }
  if (c.ring().is_fp()) {
    throw std::invalid_argument("circuit_to_wordslp: circuit must be over Z");
  }

  detail::WordSlpBuilder b;
  struct Pair {
    std::string pos, neg;
  };

  auto flank = [&b](const BigInt& n, const std::string& core) -> std::string {
    if (sgn(n) == 0) return core;
    const std::string an = b.pow(b.terminal(0), n);
    const std::string An = b.pow(b.terminal(1), n);
    return b.concat(b.concat(an, core), An);
  };

  // a^n t^coeff a^-n and its negation.
  auto monomial_pair = [&](const BigInt& coeff, const BigInt& n) -> Pair {
    if (sgn(coeff) == 0) return {b.pad(), b.pad()};
    const BigInt mag = abs(coeff);
    const std::string tp = b.pow(b.terminal(2), mag);
    const std::string tn = b.pow(b.terminal(3), mag);
    const bool positive = sgn(coeff) > 0;
    return {flank(n, positive ? tp : tn), flank(n, positive ? tn : tp)};
  };

  // a^n G^coeff a^-n for a gate pair G.
  auto scaled_pair = [&](const Pair& g, const BigInt& coeff,
                         const BigInt& n) -> Pair {
    if (sgn(coeff) == 0) return {b.pad(), b.pad()};
    const BigInt mag = abs(coeff);
    const std::string up = b.pow(g.pos, mag);
    const std::string down = b.pow(g.neg, mag);
    const bool positive = sgn(coeff) > 0;
    return {flank(n, positive ? up : down), flank(n, positive ? down : up)};
  };

  auto concat_pairs = [&](const std::vector<Pair>& parts) -> Pair {
    if (parts.empty()) return {b.pad(), b.pad()};
    Pair acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
      acc.pos = b.concat(acc.pos, parts[i].pos);
      acc.neg = b.concat(acc.neg, parts[i].neg);
    }
    return acc;
  };

  const auto order = c.topological_order();
  std::vector<Pair> gp(c.gate_count());
  for (std::size_t idx : order) {
    const auto& g = c.gate_at(idx).second;
    switch (g.op) {
      case CircuitGate::Op::input: {
        std::vector<Pair> parts;
        for (const auto& mono : g.poly->monomials()) {
          parts.push_back(monomial_pair(mono.coeff, mono.exps[0]));
        }
        gp[idx] = concat_pairs(parts);
        break;
      }
      case CircuitGate::Op::add: {
        const Pair& l = gp[c.index_of(g.lhs)];
        const Pair& r = gp[c.index_of(g.rhs)];
        gp[idx] = Pair{b.concat(l.pos, r.pos), b.concat(l.neg, r.neg)};
        break;
      }
      case CircuitGate::Op::mul: {
        const bool rhs_input = c.gate(g.rhs).op == CircuitGate::Op::input;
        const std::string& factor_name = rhs_input ? g.rhs : g.lhs;
        const std::string& base_name = rhs_input ? g.lhs : g.rhs;
        const SparsePolyBig& factor = *c.gate(factor_name).poly;
        const Pair& base = gp[c.index_of(base_name)];
        std::vector<Pair> parts;
        for (const auto& mono : factor.monomials()) {
          parts.push_back(scaled_pair(base, mono.coeff, mono.exps[0]));
        }
        gp[idx] = concat_pairs(parts);
        break;
      }
    }
  }
  NdSLP out = b.take();
  out.set_start(gp[c.index_of(c.output())].pos);
  return out;
}

struct FactorVerdict {
  std::size_t factor = 0;
  RingSpec ring;
  PitResult pit;
};

struct CwpResult {
  bool identity = false;
  BigInt delta = 0;  // combined cursor displacement of the reduced word
  bool delta_zero = false;
  std::vector<FactorVerdict> factors;  // omitted when delta != 0
};

namespace detail {

// Rebuild the word SLP for one base factor: coefficient generators of other
// factors become identity padding (rules cannot erase to the empty word),
// the surviving coefficient generator becomes t, and cursor generator a_i
// becomes a^{d^{i-1}} via doubling chains.
inline NdSLP project_reduce(const NdSLP& word, const GroupSpec& spec,
                            std::size_t factor, const BigInt& d) {
  WordSlpBuilder b;
  // target word per alphabet symbol
  std::vector<std::string> target(word.alphabet().size());
  for (std::size_t i = 0; i < word.alphabet().size(); ++i) {
    const Generator g = parse_generator(word.alphabet()[i], spec);
    if (g.is_cursor) {
      const BigInt scale = big_pow(d, g.index - 1);
      target[i] = b.pow(b.terminal(g.sign > 0 ? 0 : 1), scale);
    } else if (g.index - 1 == factor) {
      target[i] = b.terminal(g.sign > 0 ? 2 : 3);
    } else {
      target[i] = b.pad();
    }
  }

  NdSLP& out = b.slp();
  std::map<std::string, std::string> rename;
  std::size_t rc = 0;
  for (std::size_t i = 0; i < word.var_count(); ++i) {
    const auto& [name, r] = word.var_at(i);
    if (r.terminal) {
      rename[name] = target[static_cast<std::size_t>(r.symbol)];
    } else if (out.has_var(name)) {
      std::string cand;
      do {
        cand = "@u" + std::to_string(rc++);
      } while (out.has_var(cand) || word.has_var(cand));
      rename[name] = cand;
    }
  }
  auto mapped = [&rename](const std::string& v) {
    auto it = rename.find(v);
    return it == rename.end() ? v : it->second;
  };
  for (std::size_t i = 0; i < word.var_count(); ++i) {
    const auto& [name, r] = word.var_at(i);
    if (r.terminal) continue;
    out.add_concat(mapped(name), mapped(r.left), 1, mapped(r.right));
  }
  out.set_start(mapped(word.start()));
  return b.take();
}

}  // namespace detail

// Compressed word problem for G wr Z^k. The base group splits into its
// factors (the wreath product of a direct product embeds into the direct
// product of wreath products), Z^k collapses to Z by the substitution
// a_i -> a^{d^{i-1}} with d = 2(|val|+1), and each factor runs the
// SLP -> circuit reduction followed by the identity test over Z or F_p.
// The word is the identity iff the cursor displacement vanishes and every
// factor's polynomial is zero; per-factor tests are skipped when the
// displacement alone already decides.
inline CwpResult cwp(const NdSLP& word, const GroupSpec& spec,
                     const PitParams& params) {
  spec.validate();
  params.validate();
  word.require_valid();
  if (word.dim() != 1) throw std::invalid_argument("cwp: word SLP must be 1-dim");
  for (const auto& sym : word.alphabet()) {
    parse_generator(sym, spec);  // throws on unknown generators
  }

  const auto lengths = slp_lengths(word);
  const BigInt len = lengths.at(word.start())[0];
  const BigInt d = 2 * (len + 1);

  // Cursor displacement of the reduced word: sum_i z_i d^{i-1}. |z_i| stays
  // below d/2, so this vanishes iff the Z^k cursor is the origin.
  const auto order = word.topological_order();
  std::vector<BigInt> disp(word.var_count());
  for (std::size_t idx : order) {
    const auto& r = word.var_at(idx).second;
    if (r.terminal) {
      const Generator g = parse_generator(
          word.alphabet()[static_cast<std::size_t>(r.symbol)], spec);
      if (g.is_cursor) {
        disp[idx] = big_pow(d, g.index - 1);
        if (g.sign < 0) disp[idx] = -disp[idx];
      } else {
        disp[idx] = 0;
      }
    } else {
      disp[idx] = disp[word.index_of(r.left)] + disp[word.index_of(r.right)];
    }
  }

  CwpResult res;
  res.delta = disp[word.index_of(word.start())];
  res.delta_zero = sgn(res.delta) == 0;
  if (!res.delta_zero) {
    res.identity = false;
    return res;
  }

  res.identity = true;
  for (std::size_t f = 0; f < spec.factors.size(); ++f) {
    const NdSLP reduced = detail::project_reduce(word, spec, f, d);
    WordCircuit wc = slp_to_circuit(reduced);
    FactorVerdict fv;
    fv.factor = f;
    if (spec.factors[f].is_z) {
      fv.ring = RingSpec::integers();
      fv.pit = pit_z(wc.circuit, params, f);
    } else {
      fv.ring = RingSpec::fp(spec.factors[f].p);
      fv.pit = pit_fp(reduce_mod_prime(wc.circuit, spec.factors[f].p), params, f);
    }
    if (!fv.pit.zero) res.identity = false;
    res.factors.push_back(std::move(fv));
    if (!res.identity) break;
  }
  return res;
}

}  // namespace pskew
