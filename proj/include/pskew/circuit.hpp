#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pskew/bigint.hpp"
#include "pskew/error.hpp"
#include "pskew/rings.hpp"
#include "pskew/sparse_poly.hpp"
#include "pskew/tropical.hpp"

namespace pskew {

struct CircuitGate {
  enum class Op { input, add, mul };
  Op op;
  std::optional<SparsePolyBig> poly;  // input gates
  std::string lhs, rhs;               // add/mul gates
};

// A powerful skew circuit over Z[x1..xk] or F_p[x1..xk]: a DAG whose input
// gates carry polynomials in succinct (binary-exponent) representation and
// whose multiplication gates each have at least one input-gate operand.
// Gate ids are opaque strings; topological order is always recomputed.
class PowerfulSkewCircuit {
 public:
  PowerfulSkewCircuit(RingSpec ring, int num_vars)
      : ring_(ring), num_vars_(num_vars) {}

  RingSpec ring() const { return ring_; }
  int num_vars() const { return num_vars_; }

  void add_input(const std::string& name, SparsePolyBig poly) {
    if (poly.ring() != ring_ || poly.num_vars() != num_vars_) {
      throw std::invalid_argument("add_input: polynomial ring/arity mismatch");
    }
    insert(name, CircuitGate{CircuitGate::Op::input, std::move(poly), "", ""});
  }
  void add_add(const std::string& name, std::string l, std::string r) {
    insert(name, CircuitGate{CircuitGate::Op::add, std::nullopt, std::move(l),
                             std::move(r)});
  }
  void add_mul(const std::string& name, std::string l, std::string r) {
    insert(name, CircuitGate{CircuitGate::Op::mul, std::nullopt, std::move(l),
                             std::move(r)});
  }
  void set_output(std::string name) { output_ = std::move(name); }

  bool has_gate(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("unknown gate: " + name);
    return it->second;
  }
  const CircuitGate& gate(const std::string& name) const {
    return gates_[index_of(name)].second;
  }
  std::size_t gate_count() const { return gates_.size(); }
  const std::pair<std::string, CircuitGate>& gate_at(std::size_t i) const {
    return gates_[i];
  }
  const std::string& output() const { return output_; }

  // Gate indices in an order where operands precede their users.
  // Throws if the graph is cyclic or references unknown gates.
  std::vector<std::size_t> topological_order() const {
    std::vector<int> indeg(gates_.size(), 0);
    std::vector<std::vector<std::size_t>> users(gates_.size());
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      const auto& g = gates_[i].second;
      if (g.op == CircuitGate::Op::input) continue;
      for (const std::string* opnd : {&g.lhs, &g.rhs}) {
        auto it = index_.find(*opnd);
        if (it == index_.end()) {
          throw std::invalid_argument("gate '" + gates_[i].first +
                                      "' references unknown gate '" + *opnd + "'");
        }
        users[it->second].push_back(i);
        ++indeg[i];
      }
    }
    std::vector<std::size_t> ready, order;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      if (indeg[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
      std::size_t i = ready.back();
      ready.pop_back();
      order.push_back(i);
      for (std::size_t u : users[i]) {
        if (--indeg[u] == 0) ready.push_back(u);
      }
    }
    if (order.size() != gates_.size()) {
      throw std::invalid_argument("circuit is cyclic");
    }
    return order;
  }

  // Structural diagnostics; empty means valid.
  std::vector<std::string> validate() const {
    std::vector<std::string> diags;
    if (num_vars_ < 1) diags.push_back("circuit must have at least one variable");
    if (gates_.empty()) diags.push_back("circuit has no gates");
    if (output_.empty()) {
      diags.push_back("no output gate set");
    } else if (!has_gate(output_)) {
      diags.push_back("output gate '" + output_ + "' is not defined");
    }
    bool refs_ok = true;
    for (const auto& [name, g] : gates_) {
      if (g.op == CircuitGate::Op::input) {
        if (g.poly->num_vars() != num_vars_) {
          diags.push_back("gate '" + name + "': polynomial arity mismatch");
        }
        if (g.poly->ring() != ring_) {
          diags.push_back("gate '" + name + "': polynomial ring mismatch");
        }
        continue;
      }
      for (const std::string* opnd : {&g.lhs, &g.rhs}) {
        if (!has_gate(*opnd)) {
          diags.push_back("gate '" + name + "': operand '" + *opnd +
                          "' is not defined");
          refs_ok = false;
        }
      }
      if (g.op == CircuitGate::Op::mul && refs_ok && has_gate(g.lhs) &&
          has_gate(g.rhs)) {
        const bool skew = gate(g.lhs).op == CircuitGate::Op::input ||
                          gate(g.rhs).op == CircuitGate::Op::input;
        if (!skew) {
          diags.push_back("gate '" + name +
                          "': multiplication has no input-gate operand (not skew)");
        }
      }
    }
    if (refs_ok) {
      try {
        topological_order();
      } catch (const std::invalid_argument& e) {
        diags.push_back(e.what());
      }
    }
    return diags;
  }

  void require_valid() const {
    auto diags = validate();
    if (!diags.empty()) {
      std::string msg = "invalid circuit:";
      for (const auto& d : diags) msg += "\n  " + d;
      throw std::invalid_argument(msg);
    }
  }

  // Gate sizes: ||p|| for inputs, 1 for internal gates.
  BigInt size_measure() const {
    BigInt total = 0;
    for (const auto& [name, g] : gates_) {
      if (g.op == CircuitGate::Op::input) total += g.poly->size_measure();
      else total += 1;
    }
    return total;
  }

  // Upper bound on deg_var(val), 1-based variable index. Computed by the
  // max-plus relaxation: inputs get their syntactic degree, Add -> max,
  // Mul -> +. Never underestimates; exact when no cancellation occurs.
  BigInt degree_bound(int var) const {
    if (var < 1 || var > num_vars_) {
      throw std::invalid_argument("degree_bound: variable index out of range");
    }
    const auto order = topological_order();
    TropicalCircuit tc;
    tc.mode = TropicalCircuit::Mode::max_plus;
    std::vector<std::size_t> tgate(gates_.size());
    for (std::size_t idx : order) {
      const auto& g = gates_[idx].second;
      switch (g.op) {
        case CircuitGate::Op::input: {
          BigInt d;
          tgate[idx] = g.poly->degree_in(var, d)
                           ? tc.add_leaf(TropicalValue::finite(d))
                           : tc.add_leaf(TropicalValue::neg_infinity());
          break;
        }
        case CircuitGate::Op::add:
          tgate[idx] = tc.add_combine(tgate[index_.at(g.lhs)], tgate[index_.at(g.rhs)]);
          break;
        case CircuitGate::Op::mul:
          tgate[idx] = tc.add_sum(tgate[index_.at(g.lhs)], tgate[index_.at(g.rhs)]);
          break;
      }
    }
    tc.output = tgate[index_.at(output_)];
    const TropicalValue v = tropical_eval(tc);
    if (v.is_neg_inf()) return 0;  // syntactically zero polynomial
    return v.value();
  }

 private:
  void insert(const std::string& name, CircuitGate g) {
    if (name.empty()) throw std::invalid_argument("gate name must be nonempty");
    if (index_.count(name)) {
      throw std::invalid_argument("duplicate gate name: " + name);
    }
    index_[name] = gates_.size();
    gates_.emplace_back(name, std::move(g));
  }

  RingSpec ring_;
  int num_vars_;
  std::vector<std::pair<std::string, CircuitGate>> gates_;
  std::map<std::string, std::size_t> index_;
  std::string output_;
};

struct KroneckerResult {
  BigInt d;
  PowerfulSkewCircuit circuit;
};

// Replace every monomial a*x1^n1*...*xk^nk by a*y^N with
// N = n1 + n2*d + ... + nk*d^{k-1} and d = 1 + max_i degree_bound(i).
// x1 is the least-significant digit. Zero-ness of val is preserved.
inline KroneckerResult kronecker_substitute(const PowerfulSkewCircuit& c) {
  c.require_valid();
  const int k = c.num_vars();
  BigInt maxdeg = 0;
  for (int v = 1; v <= k; ++v) {
    BigInt b = c.degree_bound(v);
    if (b > maxdeg) maxdeg = b;
  }
  const BigInt d = maxdeg + 1;

  PowerfulSkewCircuit out(c.ring(), 1);
  for (std::size_t i = 0; i < c.gate_count(); ++i) {
    const auto& [name, g] = c.gate_at(i);
    switch (g.op) {
      case CircuitGate::Op::input: {
        SparsePolyBig p(c.ring(), 1);
        for (const auto& m : g.poly->monomials()) {
          BigInt n = 0, scale = 1;
          for (int v = 0; v < k; ++v) {
            n += m.exps[static_cast<std::size_t>(v)] * scale;
            scale *= d;
          }
          p.add_term(m.coeff, {n});
        }
        out.add_input(name, std::move(p));
        break;
      }
      case CircuitGate::Op::add:
        out.add_add(name, g.lhs, g.rhs);
        break;
      case CircuitGate::Op::mul:
        out.add_mul(name, g.lhs, g.rhs);
        break;
    }
  }
  out.set_output(c.output());
  return {d, std::move(out)};
}

// Reduce a circuit over Z to the same circuit over F_p; monomials whose
// coefficient vanishes mod p are dropped.
inline PowerfulSkewCircuit reduce_mod_prime(const PowerfulSkewCircuit& c,
                                            std::uint64_t p) {
  if (c.ring().is_fp()) {
    throw std::invalid_argument("reduce_mod_prime: circuit is not over Z");
  }
  PowerfulSkewCircuit out(RingSpec::fp(p), c.num_vars());
  for (std::size_t i = 0; i < c.gate_count(); ++i) {
    const auto& [name, g] = c.gate_at(i);
    switch (g.op) {
      case CircuitGate::Op::input:
        out.add_input(name, g.poly->reduced_mod(p));
        break;
      case CircuitGate::Op::add:
        out.add_add(name, g.lhs, g.rhs);
        break;
      case CircuitGate::Op::mul:
        out.add_mul(name, g.lhs, g.rhs);
        break;
    }
  }
  out.set_output(c.output());
  return out;
}

// ---- text format -------------------------------------------------------
//
//   g0 = INPUT 3*x1^17 + -1*x2^100000000000
//   g2 = ADD g0 g1
//   g3 = MUL g0 g2
//   OUTPUT g3
//
// '#' starts a comment line. The variable count is the largest index used.

inline PowerfulSkewCircuit parse_circuit(const std::string& text, RingSpec ring) {
  struct Line {
    std::size_t no;
    std::string name, kind, rest;
  };
  std::vector<Line> entries;
  std::string output;
  std::size_t output_line = 0;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == "OUTPUT") {
      std::string name;
      if (!(ls >> name)) throw ParseError(lineno, "OUTPUT needs a gate name");
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "unexpected text after OUTPUT");
      if (!output.empty()) throw ParseError(lineno, "duplicate OUTPUT line");
      output = name;
      output_line = lineno;
      continue;
    }
    std::string eq, kind;
    if (!(ls >> eq) || eq != "=") {
      throw ParseError(lineno, "expected '<gate> = INPUT|ADD|MUL ...'");
    }
    if (!(ls >> kind) || (kind != "INPUT" && kind != "ADD" && kind != "MUL")) {
      throw ParseError(lineno, "expected INPUT, ADD or MUL");
    }
    std::string rest;
    std::getline(ls, rest);
    entries.push_back(Line{lineno, tok, kind, rest});
  }
  if (output.empty()) throw ParseError(lineno, "missing OUTPUT line");

  // Two passes: arity first, then the polynomials with a fixed arity.
  int num_vars = 1;
  std::vector<SparsePolyBig> parsed;
  parsed.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.kind != "INPUT") continue;
    try {
      SparsePolyBig p = SparsePolyBig::parse(e.rest, ring, -1);
      num_vars = std::max(num_vars, p.num_vars());
    } catch (const std::invalid_argument& ex) {
      throw ParseError(e.no, ex.what());
    }
  }

  PowerfulSkewCircuit c(ring, num_vars);
  for (const auto& e : entries) {
    try {
      if (e.kind == "INPUT") {
        c.add_input(e.name, SparsePolyBig::parse(e.rest, ring, num_vars));
      } else {
        std::istringstream rs(e.rest);
        std::string l, r, extra;
        if (!(rs >> l >> r)) throw ParseError(e.no, e.kind + " needs two operands");
        if (rs >> extra) throw ParseError(e.no, "unexpected text after operands");
        if (e.kind == "ADD") c.add_add(e.name, l, r);
        else c.add_mul(e.name, l, r);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::invalid_argument& ex) {
      throw ParseError(e.no, ex.what());
    }
  }
  if (!c.has_gate(output)) {
    throw ParseError(output_line, "OUTPUT references unknown gate '" + output + "'");
  }
  c.set_output(output);
  return c;
}

inline std::string print_circuit(const PowerfulSkewCircuit& c) {
  std::string out;
  for (std::size_t i = 0; i < c.gate_count(); ++i) {
    const auto& [name, g] = c.gate_at(i);
    out += name;
    switch (g.op) {
      case CircuitGate::Op::input:
        out += " = INPUT " + g.poly->to_string();
        break;
      case CircuitGate::Op::add:
        out += " = ADD " + g.lhs + " " + g.rhs;
        break;
      case CircuitGate::Op::mul:
        out += " = MUL " + g.lhs + " " + g.rhs;
        break;
    }
    out += "\n";
  }
  out += "OUTPUT " + c.output() + "\n";
  return out;
}

}  // namespace pskew
