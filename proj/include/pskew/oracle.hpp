#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pskew/bigint.hpp"
#include "pskew/circuit.hpp"
#include "pskew/error.hpp"
#include "pskew/group.hpp"
#include "pskew/sparse_poly.hpp"

namespace pskew {

// Fully expanded polynomial: exponent vector -> nonzero coefficient. The
// brute-force reference semantics for circuit values; desk scale only.
class ExplicitPoly {
 public:
  using TermMap = std::map<std::vector<BigInt>, BigInt>;

  ExplicitPoly(RingSpec ring, int num_vars) : ring_(ring), num_vars_(num_vars) {}

  static ExplicitPoly from_sparse(const SparsePolyBig& p) {
    ExplicitPoly out(p.ring(), p.num_vars());
    for (const auto& m : p.monomials()) out.add_term(m.exps, m.coeff);
    return out;
  }

  RingSpec ring() const { return ring_; }
  int num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t support_size() const { return terms_.size(); }

  void add_term(const std::vector<BigInt>& exps, const BigInt& coeff) {
    if (exps.size() != static_cast<std::size_t>(num_vars_)) {
      throw std::invalid_argument("ExplicitPoly: exponent arity mismatch");
    }
    auto it = terms_.find(exps);
    BigInt next = normalize(coeff + (it == terms_.end() ? BigInt(0) : it->second));
    if (sgn(next) == 0) {
      if (it != terms_.end()) terms_.erase(it);
    } else if (it == terms_.end()) {
      terms_.emplace(exps, std::move(next));
    } else {
      it->second = std::move(next);
    }
  }

  bool operator==(const ExplicitPoly& o) const {
    return ring_ == o.ring_ && num_vars_ == o.num_vars_ && terms_ == o.terms_;
  }
  bool operator!=(const ExplicitPoly& o) const { return !(*this == o); }

  SparsePolyBig to_sparse() const {
    SparsePolyBig out(ring_, num_vars_);
    for (const auto& [exps, coeff] : terms_) out.add_term(coeff, exps);
    return out;
  }

 private:
  BigInt normalize(BigInt c) const {
    if (ring_.is_fp()) {
      BigInt m = c % BigInt(static_cast<unsigned long>(ring_.p));
      if (sgn(m) < 0) m += BigInt(static_cast<unsigned long>(ring_.p));
      return m;
    }
    return c;
  }

  RingSpec ring_;
  int num_vars_;
  TermMap terms_;
};

inline ExplicitPoly explicit_add(const ExplicitPoly& a, const ExplicitPoly& b,
                                 std::uint64_t budget) {
  ExplicitPoly out = a;
  for (const auto& [exps, coeff] : b.terms()) out.add_term(exps, coeff);
  if (out.support_size() > budget) {
    throw BudgetExceeded("polynomial support exceeds oracle budget");
  }
  return out;
}

inline ExplicitPoly explicit_mul(const ExplicitPoly& a, const ExplicitPoly& b,
                                 std::uint64_t budget) {
  ExplicitPoly out(a.ring(), a.num_vars());
  std::vector<BigInt> exps(static_cast<std::size_t>(a.num_vars()));
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < exps.size(); ++i) exps[i] = ea[i] + eb[i];
      out.add_term(exps, ca * cb);
      if (out.support_size() > budget) {
        throw BudgetExceeded("polynomial support exceeds oracle budget");
      }
    }
  }
  return out;
}

// Exact expansion of a circuit by topological evaluation over ExplicitPoly.
// Throws BudgetExceeded as soon as any intermediate support passes `budget`.
inline ExplicitPoly expand_circuit(const PowerfulSkewCircuit& c,
                                   std::uint64_t monomial_budget) {
  c.require_valid();
  const auto order = c.topological_order();
  std::vector<ExplicitPoly> vals(c.gate_count(),
                                 ExplicitPoly(c.ring(), c.num_vars()));
  for (std::size_t idx : order) {
    const auto& g = c.gate_at(idx).second;
    switch (g.op) {
      case CircuitGate::Op::input:
        vals[idx] = ExplicitPoly::from_sparse(*g.poly);
        if (vals[idx].support_size() > monomial_budget) {
          throw BudgetExceeded("polynomial support exceeds oracle budget");
        }
        break;
      case CircuitGate::Op::add:
        vals[idx] = explicit_add(vals[c.index_of(g.lhs)], vals[c.index_of(g.rhs)],
                                 monomial_budget);
        break;
      case CircuitGate::Op::mul:
        vals[idx] = explicit_mul(vals[c.index_of(g.lhs)], vals[c.index_of(g.rhs)],
                                 monomial_budget);
        break;
    }
  }
  return vals[c.index_of(c.output())];
}

// ---- wreath product simulation ------------------------------------------

// Explicit element (f, g) of G wr Z^k: finitely supported f from cursor
// positions to base tuples (one coordinate per factor of G, reduced mod p
// for Z_p factors), plus the cursor itself. Identity values are not stored.
struct WreathElem {
  std::map<std::vector<BigInt>, std::vector<BigInt>> support;
  std::vector<BigInt> cursor;
};

inline WreathElem wreath_identity(const GroupSpec& spec) {
  WreathElem e;
  e.cursor.assign(spec.cursor_rank, BigInt(0));
  return e;
}

inline bool is_identity(const WreathElem& e) {
  if (!e.support.empty()) return false;
  for (const auto& c : e.cursor) {
    if (sgn(c) != 0) return false;
  }
  return true;
}

namespace detail {

inline void wreath_deposit(WreathElem& e, const std::vector<BigInt>& pos,
                           std::size_t factor, const BigInt& delta,
                           const GroupSpec& spec) {
  auto it = e.support.find(pos);
  if (it == e.support.end()) {
    it = e.support.emplace(pos, std::vector<BigInt>(spec.factors.size(), BigInt(0)))
             .first;
  }
  BigInt& slot = it->second[factor];
  slot += delta;
  if (!spec.factors[factor].is_z) {
    const BigInt p(static_cast<unsigned long>(spec.factors[factor].p));
    slot %= p;
    if (sgn(slot) < 0) slot += p;
  }
  bool all_zero = true;
  for (const auto& v : it->second) {
    if (sgn(v) != 0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) e.support.erase(it);
}

}  // namespace detail

// The wreath multiplication rule: (f1,g1)(f2,g2) = (f, g1+g2) with
// f(a) = f1(a) + f2(a - g1), base written additively.
inline WreathElem wreath_mul(const WreathElem& u, const WreathElem& v,
                             const GroupSpec& spec) {
  if (u.cursor.size() != spec.cursor_rank || v.cursor.size() != spec.cursor_rank) {
    throw std::invalid_argument("wreath_mul: cursor rank mismatch");
  }
  WreathElem out = u;
  std::vector<BigInt> pos(spec.cursor_rank);
  for (const auto& [at, vals] : v.support) {
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = at[i] + u.cursor[i];
    for (std::size_t f = 0; f < spec.factors.size(); ++f) {
      if (sgn(vals[f]) != 0) detail::wreath_deposit(out, pos, f, vals[f], spec);
    }
  }
  for (std::size_t i = 0; i < out.cursor.size(); ++i) {
    out.cursor[i] += v.cursor[i];
  }
  return out;
}

inline WreathElem generator_element(const Generator& g, const GroupSpec& spec) {
  WreathElem e = wreath_identity(spec);
  if (g.is_cursor) {
    e.cursor[g.index - 1] = g.sign;
  } else {
    std::vector<BigInt> at(spec.cursor_rank, BigInt(0));
    detail::wreath_deposit(e, at, g.index - 1, BigInt(g.sign), spec);
  }
  return e;
}

// Left-to-right product of generator elements; the cursor intuition: a_i
// moves the cursor, g_j adds into the base coordinate under the cursor.
inline WreathElem simulate_word(const std::vector<std::string>& word,
                                const GroupSpec& spec,
                                std::uint64_t symbol_budget) {
  spec.validate();
  if (word.size() > symbol_budget) {
    throw BudgetExceeded("word length exceeds oracle budget");
  }
  WreathElem acc = wreath_identity(spec);
  for (const auto& tok : word) {
    const Generator g = parse_generator(tok, spec);
    if (g.is_cursor) {
      // cheap in-place cursor move
      acc.cursor[g.index - 1] += g.sign;
    } else {
      std::vector<BigInt> at = acc.cursor;
      detail::wreath_deposit(acc, at, g.index - 1, BigInt(g.sign), spec);
    }
  }
  return acc;
}

inline nlohmann::ordered_json wreath_elem_to_json(const WreathElem& e) {
  nlohmann::ordered_json j;
  j["cursor"] = nlohmann::ordered_json::array();
  for (const auto& c : e.cursor) j["cursor"].push_back(c.get_str());
  j["support"] = nlohmann::ordered_json::array();
  for (const auto& [at, vals] : e.support) {
    nlohmann::ordered_json cell;
    cell["at"] = nlohmann::ordered_json::array();
    for (const auto& c : at) cell["at"].push_back(c.get_str());
    cell["val"] = nlohmann::ordered_json::array();
    for (const auto& v : vals) cell["val"].push_back(v.get_str());
    j["support"].push_back(std::move(cell));
  }
  return j;
}

}  // namespace pskew
