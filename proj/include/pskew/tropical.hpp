#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pskew/bigint.hpp"

namespace pskew {

// Element of (Z u {+inf}, min, +) or (Z u {-inf}, max, +). Infinities are
// absorbing for + and neutral for min/max respectively.
class TropicalValue {
 public:
  static TropicalValue finite(BigInt v) { return TropicalValue(0, std::move(v)); }
  static TropicalValue pos_infinity() { return TropicalValue(+1, 0); }
  static TropicalValue neg_infinity() { return TropicalValue(-1, 0); }

  bool is_finite() const { return inf_ == 0; }
  bool is_pos_inf() const { return inf_ > 0; }
  bool is_neg_inf() const { return inf_ < 0; }

  const BigInt& value() const {
    if (!is_finite()) throw std::logic_error("TropicalValue: infinite");
    return v_;
  }

  bool operator==(const TropicalValue& o) const {
    return inf_ == o.inf_ && (inf_ != 0 || v_ == o.v_);
  }
  bool operator!=(const TropicalValue& o) const { return !(*this == o); }

  friend TropicalValue tropical_sum(const TropicalValue& a, const TropicalValue& b) {
    if (a.inf_ != 0 || b.inf_ != 0) {
      const int s = a.inf_ != 0 ? a.inf_ : b.inf_;
      const int t = b.inf_ != 0 ? b.inf_ : a.inf_;
      if (s != t) throw std::logic_error("TropicalValue: +inf + -inf");
      return s > 0 ? pos_infinity() : neg_infinity();
    }
    return finite(a.v_ + b.v_);
  }

  friend TropicalValue tropical_min(const TropicalValue& a, const TropicalValue& b) {
    if (a.is_pos_inf()) return b;
    if (b.is_pos_inf()) return a;
    if (a.is_neg_inf() || b.is_neg_inf()) return neg_infinity();
    return a.v_ <= b.v_ ? a : b;
  }

  friend TropicalValue tropical_max(const TropicalValue& a, const TropicalValue& b) {
    if (a.is_neg_inf()) return b;
    if (b.is_neg_inf()) return a;
    if (a.is_pos_inf() || b.is_pos_inf()) return pos_infinity();
    return a.v_ >= b.v_ ? a : b;
  }

 private:
  TropicalValue(int inf, BigInt v) : inf_(inf), v_(std::move(v)) {}
  int inf_;
  BigInt v_;
};

// A skew circuit over (min,+) or (max,+): same DAG shape as the polynomial
// circuits, with Add gates mapped to min/max and Mul gates to +. Gates are
// indices; gate operands must point at earlier gates.
struct TropicalCircuit {
  enum class Mode { min_plus, max_plus };
  enum class Op { leaf, combine, sum };  // combine = min or max by mode

  struct Gate {
    Op op;
    TropicalValue value = TropicalValue::finite(0);  // leaf only
    std::size_t lhs = 0, rhs = 0;
  };

  Mode mode = Mode::max_plus;
  std::vector<Gate> gates;
  std::size_t output = 0;

  std::size_t add_leaf(TropicalValue v) {
    gates.push_back(Gate{Op::leaf, std::move(v), 0, 0});
    return gates.size() - 1;
  }
  std::size_t add_combine(std::size_t l, std::size_t r) {
    gates.push_back(Gate{Op::combine, TropicalValue::finite(0), l, r});
    return gates.size() - 1;
  }
  std::size_t add_sum(std::size_t l, std::size_t r) {
    gates.push_back(Gate{Op::sum, TropicalValue::finite(0), l, r});
    return gates.size() - 1;
  }
};

inline TropicalValue tropical_eval(const TropicalCircuit& c) {
  if (c.gates.empty()) throw std::invalid_argument("tropical_eval: empty circuit");
  std::vector<TropicalValue> vals(c.gates.size(), TropicalValue::finite(0));
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    if (g.op != TropicalCircuit::Op::leaf && (g.lhs >= i || g.rhs >= i)) {
      throw std::invalid_argument("tropical_eval: gates out of topological order");
    }
    switch (g.op) {
      case TropicalCircuit::Op::leaf:
        vals[i] = g.value;
        break;
      case TropicalCircuit::Op::combine:
        vals[i] = c.mode == TropicalCircuit::Mode::min_plus
                      ? tropical_min(vals[g.lhs], vals[g.rhs])
                      : tropical_max(vals[g.lhs], vals[g.rhs]);
        break;
      case TropicalCircuit::Op::sum:
        vals[i] = tropical_sum(vals[g.lhs], vals[g.rhs]);
        break;
    }
  }
  if (c.output >= c.gates.size()) {
    throw std::invalid_argument("tropical_eval: bad output gate");
  }
  return vals[c.output];
}

}  // namespace pskew
