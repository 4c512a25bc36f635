#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pskew/bigint.hpp"
#include "pskew/rings.hpp"

namespace pskew {

// One term c * x1^e1 * ... * xk^ek. Exponents are arbitrary-precision
// naturals; that is the whole point of the succinct representation.
struct Monomial {
  BigInt coeff;
  std::vector<BigInt> exps;
};

// Multivariate polynomial with binary-encoded exponents. Canonical form:
// no zero coefficients, exponent vectors pairwise distinct and stored in
// ascending lexicographic order.
class SparsePolyBig {
 public:
  SparsePolyBig(RingSpec ring, int num_vars) : ring_(ring), num_vars_(num_vars) {
    if (num_vars < 1) {
      throw std::invalid_argument("SparsePolyBig: need at least one variable");
    }
  }

  static SparsePolyBig zero(RingSpec ring, int num_vars) {
    return SparsePolyBig(ring, num_vars);
  }

  static SparsePolyBig constant(RingSpec ring, int num_vars, const BigInt& c) {
    SparsePolyBig p(ring, num_vars);
    p.add_term(c, std::vector<BigInt>(static_cast<std::size_t>(num_vars), 0));
    return p;
  }

  static SparsePolyBig monomial(RingSpec ring, int num_vars, const BigInt& c,
                                std::vector<BigInt> exps) {
    SparsePolyBig p(ring, num_vars);
    p.add_term(c, std::move(exps));
    return p;
  }

  RingSpec ring() const { return ring_; }
  int num_vars() const { return num_vars_; }
  const std::vector<Monomial>& monomials() const { return monos_; }
  bool is_zero() const { return monos_.empty(); }

  // Accumulate a term, keeping the canonical invariants.
  void add_term(BigInt coeff, std::vector<BigInt> exps) {
    if (exps.size() != static_cast<std::size_t>(num_vars_)) {
      throw std::invalid_argument("SparsePolyBig: exponent arity mismatch");
    }
    for (const auto& e : exps) {
      if (sgn(e) < 0) {
        throw std::invalid_argument("SparsePolyBig: negative exponent");
      }
    }
    coeff = normalize_coeff(std::move(coeff));
    auto it = std::lower_bound(monos_.begin(), monos_.end(), exps,
                               [](const Monomial& m, const std::vector<BigInt>& e) {
                                 return m.exps < e;
                               });
    if (it != monos_.end() && it->exps == exps) {
      it->coeff = normalize_coeff(it->coeff + coeff);
      if (sgn(it->coeff) == 0) monos_.erase(it);
      return;
    }
    if (sgn(coeff) == 0) return;
    monos_.insert(it, Monomial{std::move(coeff), std::move(exps)});
  }

  // Largest exponent of variable `var` (1-based); nullopt-style: returns
  // false when the polynomial is zero.
  bool degree_in(int var, BigInt& out) const {
    if (var < 1 || var > num_vars_) {
      throw std::invalid_argument("SparsePolyBig: variable index out of range");
    }
    if (monos_.empty()) return false;
    out = monos_[0].exps[static_cast<std::size_t>(var - 1)];
    for (const auto& m : monos_) {
      const BigInt& e = m.exps[static_cast<std::size_t>(var - 1)];
      if (e > out) out = e;
    }
    return true;
  }

  // The size measure ||p||: summed bit lengths of coefficients and exponents.
  BigInt size_measure() const {
    BigInt total = 0;
    for (const auto& m : monos_) {
      total += static_cast<unsigned long>(std::max<std::size_t>(1, bit_length(abs(m.coeff))));
      for (const auto& e : m.exps) {
        total += static_cast<unsigned long>(std::max<std::size_t>(1, bit_length(e)));
      }
    }
    return total;
  }

  // Sum of absolute coefficient values (used for Z coefficient bounds).
  BigInt coeff_l1() const {
    BigInt total = 0;
    for (const auto& m : monos_) total += abs(m.coeff);
    return total;
  }

  SparsePolyBig reduced_mod(std::uint64_t p) const {
    SparsePolyBig out(RingSpec::fp(p), num_vars_);
    for (const auto& m : monos_) out.add_term(m.coeff, m.exps);
    return out;
  }

  bool operator==(const SparsePolyBig& o) const {
    if (ring_ != o.ring_ || num_vars_ != o.num_vars_) return false;
    if (monos_.size() != o.monos_.size()) return false;
    for (std::size_t i = 0; i < monos_.size(); ++i) {
      if (monos_[i].coeff != o.monos_[i].coeff) return false;
      if (monos_[i].exps != o.monos_[i].exps) return false;
    }
    return true;
  }
  bool operator!=(const SparsePolyBig& o) const { return !(*this == o); }

  std::string to_string() const;
  static SparsePolyBig parse(const std::string& text, RingSpec ring,
                             int num_vars = -1);

 private:
  BigInt normalize_coeff(BigInt c) const {
    if (ring_.is_fp()) {
      BigInt m = c % BigInt(static_cast<unsigned long>(ring_.p));
      if (sgn(m) < 0) m += BigInt(static_cast<unsigned long>(ring_.p));
      return m;
    }
    return c;
  }

  RingSpec ring_;
  int num_vars_;
  std::vector<Monomial> monos_;
};

inline SparsePolyBig sparse_add(const SparsePolyBig& a, const SparsePolyBig& b) {
  if (a.ring() != b.ring() || a.num_vars() != b.num_vars()) {
    throw std::invalid_argument("sparse_add: ring or arity mismatch");
  }
  SparsePolyBig out = a;
  for (const auto& m : b.monomials()) out.add_term(m.coeff, m.exps);
  return out;
}

// ---- text format -------------------------------------------------------
//
// Sum of terms `c*x^N` (univariate) or `c*x1^N1*x2^N2*...`; exponents and
// coefficients are decimal with arbitrarily many digits. Canonical printing
// is descending lexicographic exponent order; the constant term prints as a
// bare integer and exponent 1 prints without `^`.

inline std::string SparsePolyBig::to_string() const {
  if (monos_.empty()) return "0";
  std::string out;
  for (std::size_t idx = monos_.size(); idx-- > 0;) {
    const Monomial& m = monos_[idx];
    if (!out.empty()) out += " + ";
    std::string term = m.coeff.get_str();
    bool any_var = false;
    for (int v = 0; v < num_vars_; ++v) {
      const BigInt& e = m.exps[static_cast<std::size_t>(v)];
      if (sgn(e) == 0) continue;
      any_var = true;
      term += "*x";
      if (num_vars_ > 1) term += std::to_string(v + 1);
      if (e != 1) term += "^" + e.get_str();
    }
    (void)any_var;
    out += term;
  }
  return out;
}

namespace detail {

struct PolyLexer {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) {
      throw std::invalid_argument("expected a number in polynomial at offset " +
                                  std::to_string(pos));
    }
    return s.substr(start, pos - start);
  }
};

}  // namespace detail

inline SparsePolyBig SparsePolyBig::parse(const std::string& text, RingSpec ring,
                                          int num_vars) {
  struct RawTerm {
    BigInt coeff;
    std::vector<std::pair<int, BigInt>> powers;  // (1-based var, exponent)
  };
  std::vector<RawTerm> terms;
  int max_var = 1;

  detail::PolyLexer lx{text};
  if (lx.eof()) throw std::invalid_argument("empty polynomial");
  bool first = true;
  while (!lx.eof()) {
    int sign = 1;
    if (!first) {
      if (lx.accept('+')) {
        // separator
      } else if (lx.accept('-')) {
        sign = -1;
      } else {
        throw std::invalid_argument("expected '+' or '-' between terms at offset " +
                                    std::to_string(lx.pos));
      }
    }
    first = false;
    // optional sign attached to the term itself
    if (lx.accept('-')) sign = -sign;
    else lx.accept('+');

    RawTerm term;
    term.coeff = sign;
    bool has_coeff = false, has_factor = false;
    while (true) {
      char c = lx.peek();
      if (c >= '0' && c <= '9') {
        if (has_coeff || has_factor) {
          throw std::invalid_argument(
              "integer factor must come first in a term at offset " +
              std::to_string(lx.pos));
        }
        term.coeff *= BigInt(lx.digits());
        has_coeff = true;
      } else if (c == 'x') {
        ++lx.pos;
        int var = 1;
        if (lx.pos < text.size() && text[lx.pos] >= '0' && text[lx.pos] <= '9') {
          const std::string d = lx.digits();
          if (d.size() > 6) throw std::invalid_argument("variable index too large");
          var = std::stoi(d);
          if (var < 1) throw std::invalid_argument("variable index must be >= 1");
        }
        BigInt e = 1;
        if (lx.accept('^')) e = BigInt(lx.digits());
        if (sgn(e) < 0) throw std::invalid_argument("negative exponent");
        term.powers.emplace_back(var, e);
        max_var = std::max(max_var, var);
        has_factor = true;
      } else {
        throw std::invalid_argument("unexpected character in polynomial at offset " +
                                    std::to_string(lx.pos));
      }
      if (!lx.accept('*')) break;
    }
    terms.push_back(std::move(term));
    char c = lx.peek();
    if (c != '\0' && c != '+' && c != '-') {
      throw std::invalid_argument("unexpected trailing text at offset " +
                                  std::to_string(lx.pos));
    }
  }

  const int k = num_vars > 0 ? num_vars : max_var;
  if (max_var > k) {
    throw std::invalid_argument("variable x" + std::to_string(max_var) +
                                " exceeds arity " + std::to_string(k));
  }
  SparsePolyBig out(ring, k);
  for (auto& t : terms) {
    std::vector<BigInt> exps(static_cast<std::size_t>(k), 0);
    for (auto& [var, e] : t.powers) {
      exps[static_cast<std::size_t>(var - 1)] += e;
    }
    out.add_term(std::move(t.coeff), std::move(exps));
  }
  return out;
}

}  // namespace pskew
