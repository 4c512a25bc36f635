#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pskew/circuit.hpp"
#include "pskew/error.hpp"
#include "pskew/rings.hpp"
#include "pskew/sparse_poly.hpp"

namespace pskew {

// Powerful branching program: DAG with succinct-polynomial edge labels.
// val = sum over source-sink paths of the ordered label products. Parallel
// edges are merged by adding labels; zero-labelled edges are dropped.
class PowerfulBP {
 public:
  PowerfulBP(RingSpec ring, int num_vars) : ring_(ring), num_vars_(num_vars) {}

  RingSpec ring() const { return ring_; }
  int num_vars() const { return num_vars_; }

  void add_node(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("node name must be nonempty");
    if (!node_index_.count(name)) {
      node_index_[name] = nodes_.size();
      nodes_.push_back(name);
    }
  }

  void add_edge(const std::string& u, const std::string& v, SparsePolyBig label) {
    if (label.ring() != ring_ || label.num_vars() != num_vars_) {
      throw std::invalid_argument("add_edge: label ring/arity mismatch");
    }
    add_node(u);
    add_node(v);
    auto key = std::make_pair(u, v);
    auto it = edges_.find(key);
    if (it == edges_.end()) {
      if (!label.is_zero()) edges_.emplace(std::move(key), std::move(label));
      return;
    }
    it->second = sparse_add(it->second, label);
    if (it->second.is_zero()) edges_.erase(it);
  }

  void set_source(const std::string& s) { add_node(s); source_ = s; }
  void set_sink(const std::string& t) { add_node(t); sink_ = t; }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::map<std::pair<std::string, std::string>, SparsePolyBig>& edges() const {
    return edges_;
  }
  const std::string& source() const { return source_; }
  const std::string& sink() const { return sink_; }
  bool has_node(const std::string& n) const { return node_index_.count(n) != 0; }
  std::size_t node_index(const std::string& n) const { return node_index_.at(n); }

  std::vector<std::string> validate() const {
    std::vector<std::string> diags;
    if (nodes_.empty()) diags.push_back("branching program has no nodes");
    if (source_.empty() || !has_node(source_)) diags.push_back("missing source node");
    if (sink_.empty() || !has_node(sink_)) diags.push_back("missing sink node");
    if (!source_.empty() && source_ == sink_ && nodes_.size() > 1) {
      diags.push_back("source equals sink in a multi-node program");
    }
    try {
      topological_order();
    } catch (const std::invalid_argument& e) {
      diags.push_back(e.what());
    }
    return diags;
  }

  void require_valid() const {
    auto diags = validate();
    if (!diags.empty()) {
      std::string msg = "invalid branching program:";
      for (const auto& d : diags) msg += "\n  " + d;
      throw std::invalid_argument(msg);
    }
  }

  std::vector<std::size_t> topological_order() const {
    std::vector<int> indeg(nodes_.size(), 0);
    std::vector<std::vector<std::size_t>> succ(nodes_.size());
    for (const auto& [key, label] : edges_) {
      const std::size_t u = node_index_.at(key.first);
      const std::size_t v = node_index_.at(key.second);
      succ[u].push_back(v);
      ++indeg[v];
    }
    std::vector<std::size_t> ready, order;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (indeg[i] == 0) ready.push_back(i);
    }
    while (!ready.empty()) {
      std::size_t i = ready.back();
      ready.pop_back();
      order.push_back(i);
      for (std::size_t v : succ[i]) {
        if (--indeg[v] == 0) ready.push_back(v);
      }
    }
    if (order.size() != nodes_.size()) {
      throw std::invalid_argument("branching program graph is cyclic");
    }
    return order;
  }

 private:
  RingSpec ring_;
  int num_vars_;
  std::vector<std::string> nodes_;
  std::map<std::string, std::size_t> node_index_;
  std::map<std::pair<std::string, std::string>, SparsePolyBig> edges_;
  std::string source_, sink_;
};

// Circuit -> BP. Every gate becomes a node; a fresh source is added.
// Input gate A: edge source -> A labelled rhs(A). Add gate A = B + C:
// unit edges B -> A and C -> A. Mul gate A = B x C with C an input gate:
// edge B -> A labelled rhs(C). val_BP(A) = val_C(A) for every gate.
inline PowerfulBP circuit_to_bp(const PowerfulSkewCircuit& c) {
  c.require_valid();
  PowerfulBP bp(c.ring(), c.num_vars());

  std::string src = "__src";
  while (c.has_gate(src)) src += "_";
  bp.add_node(src);
  bp.set_source(src);

  const SparsePolyBig unit = SparsePolyBig::constant(c.ring(), c.num_vars(), 1);
  for (std::size_t i = 0; i < c.gate_count(); ++i) {
    const auto& [name, g] = c.gate_at(i);
    bp.add_node(name);
    switch (g.op) {
      case CircuitGate::Op::input:
        bp.add_edge(src, name, *g.poly);
        break;
      case CircuitGate::Op::add:
        bp.add_edge(g.lhs, name, unit);
        bp.add_edge(g.rhs, name, unit);
        break;
      case CircuitGate::Op::mul: {
        // The input-gate operand becomes the label; the other is the tail.
        const bool rhs_input = c.gate(g.rhs).op == CircuitGate::Op::input;
        const std::string& tail = rhs_input ? g.lhs : g.rhs;
        const std::string& lab = rhs_input ? g.rhs : g.lhs;
        bp.add_edge(tail, name, *c.gate(lab).poly);
        break;
      }
    }
  }
  bp.set_sink(c.output());
  return bp;
}

// BP -> circuit. Node v gets a gate computing the sum over in-edges (u,v)
// of val(u) * label(u,v); the source gate is the constant 1. Labels sit in
// input gates, so every multiplication is skew.
inline PowerfulSkewCircuit bp_to_circuit(const PowerfulBP& bp) {
  bp.require_valid();
  PowerfulSkewCircuit c(bp.ring(), bp.num_vars());

  const auto order = bp.topological_order();
  std::vector<std::string> node_gate(bp.nodes().size());
  std::vector<std::vector<std::pair<std::size_t, const SparsePolyBig*>>> in_edges(
      bp.nodes().size());
  for (const auto& [key, label] : bp.edges()) {
    in_edges[bp.node_index(key.second)].emplace_back(bp.node_index(key.first),
                                                     &label);
  }

  std::size_t counter = 0;
  auto fresh = [&counter](const char* stem) {
    return std::string(stem) + std::to_string(counter++);
  };

  const std::size_t src = bp.node_index(bp.source());
  for (std::size_t v : order) {
    std::vector<std::string> terms;
    for (const auto& [u, label] : in_edges[v]) {
      const std::string lab = fresh("l");
      c.add_input(lab, *label);
      const std::string m = fresh("m");
      c.add_mul(m, node_gate[u], lab);
      terms.push_back(m);
    }
    if (v == src) {
      const std::string one = fresh("c");
      c.add_input(one, SparsePolyBig::constant(bp.ring(), bp.num_vars(), 1));
      terms.push_back(one);
    }
    std::string acc;
    if (terms.empty()) {
      acc = fresh("z");
      c.add_input(acc, SparsePolyBig::zero(bp.ring(), bp.num_vars()));
    } else {
      acc = terms[0];
      for (std::size_t i = 1; i < terms.size(); ++i) {
        const std::string s = fresh("s");
        c.add_add(s, acc, terms[i]);
        acc = s;
      }
    }
    node_gate[v] = acc;
  }
  c.set_output(node_gate[bp.node_index(bp.sink())]);
  return c;
}

// Topological evaluation of a BP over a semiring. `to_value` maps an edge
// label to a semiring element.
template <class Sem, class LabelFn>
typename Sem::Value bp_eval_topo(const PowerfulBP& bp, const Sem& sem,
                                 LabelFn to_value) {
  bp.require_valid();
  const auto order = bp.topological_order();
  std::vector<typename Sem::Value> val(bp.nodes().size(), sem.zero());
  std::vector<std::vector<std::pair<std::size_t, const SparsePolyBig*>>> in_edges(
      bp.nodes().size());
  for (const auto& [key, label] : bp.edges()) {
    in_edges[bp.node_index(key.second)].emplace_back(bp.node_index(key.first),
                                                     &label);
  }
  const std::size_t src = bp.node_index(bp.source());
  for (std::size_t v : order) {
    typename Sem::Value acc = v == src ? sem.one() : sem.zero();
    for (const auto& [u, label] : in_edges[v]) {
      acc = sem.add(acc, sem.mul(val[u], to_value(*label)));
    }
    val[v] = acc;
  }
  return val[bp.node_index(bp.sink())];
}

// Matrix-power evaluation: val = (sum_{i=0..n} M^i)[source, sink] where M is
// the label adjacency matrix. Cross-check evaluator only.
template <class Sem, class LabelFn>
typename Sem::Value bp_eval_matrix(const PowerfulBP& bp, const Sem& sem,
                                   LabelFn to_value) {
  bp.require_valid();
  const std::size_t n = bp.nodes().size();
  using V = typename Sem::Value;
  std::vector<std::vector<V>> m(n, std::vector<V>(n, sem.zero()));
  for (const auto& [key, label] : bp.edges()) {
    const std::size_t u = bp.node_index(key.first);
    const std::size_t v = bp.node_index(key.second);
    m[u][v] = sem.add(m[u][v], to_value(label));
  }
  auto identity = [&] {
    std::vector<std::vector<V>> id(n, std::vector<V>(n, sem.zero()));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = sem.one();
    return id;
  };
  auto matmul = [&](const std::vector<std::vector<V>>& a,
                    const std::vector<std::vector<V>>& b) {
    std::vector<std::vector<V>> out(n, std::vector<V>(n, sem.zero()));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          out[i][j] = sem.add(out[i][j], sem.mul(a[i][k], b[k][j]));
        }
      }
    }
    return out;
  };
  auto power = identity();
  auto total = identity();
  for (std::size_t i = 1; i <= n; ++i) {
    power = matmul(power, m);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        total[r][c] = sem.add(total[r][c], power[r][c]);
      }
    }
  }
  return total[bp.node_index(bp.source())][bp.node_index(bp.sink())];
}

// ---- text format -------------------------------------------------------
//
//   NODE u
//   EDGE u v <polynomial>
//   SOURCE u
//   SINK v

inline PowerfulBP parse_bp(const std::string& text, RingSpec ring) {
  struct EdgeLine {
    std::size_t no;
    std::string u, v, poly;
  };
  std::vector<std::string> nodes;
  std::vector<EdgeLine> edge_lines;
  std::string source, sink;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == "NODE") {
      std::string n;
      if (!(ls >> n)) throw ParseError(lineno, "NODE needs a name");
      nodes.push_back(n);
    } else if (tok == "EDGE") {
      std::string u, v, rest;
      if (!(ls >> u >> v)) throw ParseError(lineno, "EDGE needs two node names");
      std::getline(ls, rest);
      if (rest.find_first_not_of(" \t") == std::string::npos) {
        throw ParseError(lineno, "EDGE needs a label polynomial");
      }
      edge_lines.push_back(EdgeLine{lineno, u, v, rest});
    } else if (tok == "SOURCE") {
      if (!(ls >> source)) throw ParseError(lineno, "SOURCE needs a node name");
    } else if (tok == "SINK") {
      if (!(ls >> sink)) throw ParseError(lineno, "SINK needs a node name");
    } else {
      throw ParseError(lineno, "expected NODE, EDGE, SOURCE or SINK");
    }
  }
  if (source.empty()) throw ParseError(lineno, "missing SOURCE line");
  if (sink.empty()) throw ParseError(lineno, "missing SINK line");

  int num_vars = 1;
  for (const auto& e : edge_lines) {
    try {
      SparsePolyBig p = SparsePolyBig::parse(e.poly, ring, -1);
      num_vars = std::max(num_vars, p.num_vars());
    } catch (const std::invalid_argument& ex) {
      throw ParseError(e.no, ex.what());
    }
  }
  PowerfulBP bp(ring, num_vars);
  for (const auto& n : nodes) bp.add_node(n);
  for (const auto& e : edge_lines) {
    try {
      bp.add_edge(e.u, e.v, SparsePolyBig::parse(e.poly, ring, num_vars));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(e.no, ex.what());
    }
  }
  bp.set_source(source);
  bp.set_sink(sink);
  return bp;
}

inline std::string print_bp(const PowerfulBP& bp) {
  std::string out;
  for (const auto& n : bp.nodes()) out += "NODE " + n + "\n";
  for (const auto& [key, label] : bp.edges()) {
    out += "EDGE " + key.first + " " + key.second + " " + label.to_string() + "\n";
  }
  out += "SOURCE " + bp.source() + "\n";
  out += "SINK " + bp.sink() + "\n";
  return out;
}

}  // namespace pskew
