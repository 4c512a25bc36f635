#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pskew/bigint.hpp"
#include "pskew/circuit.hpp"
#include "pskew/error.hpp"
#include "pskew/pit.hpp"
#include "pskew/sparse_poly.hpp"

namespace pskew {

struct SlpRule {
  bool terminal = false;
  int symbol = 0;  // alphabet index, terminals
  std::string left, right;
  int axis = 1;  // 1-based, concatenations
};

// n-dimensional straight-line program: an acyclic grammar where each
// variable derives either a single symbol (a 1x...x1 cell) or the
// concatenation of two variables along one axis. Terminals force every
// length to be >= 1, so empty pictures do not exist.
class NdSLP {
 public:
  NdSLP(int dim, std::vector<std::string> alphabet)
      : dim_(dim), alphabet_(std::move(alphabet)) {
    if (dim_ < 1) throw std::invalid_argument("NdSLP: dimension must be >= 1");
    if (alphabet_.empty()) throw std::invalid_argument("NdSLP: empty alphabet");
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      if (alphabet_[i].empty()) throw std::invalid_argument("NdSLP: empty symbol");
      if (!symbol_index_.emplace(alphabet_[i], static_cast<int>(i)).second) {
        throw std::invalid_argument("NdSLP: duplicate symbol " + alphabet_[i]);
      }
    }
  }

  int dim() const { return dim_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  int symbol_index(const std::string& s) const {
    auto it = symbol_index_.find(s);
    if (it == symbol_index_.end()) {
      throw std::invalid_argument("NdSLP: unknown symbol '" + s + "'");
    }
    return it->second;
  }

  void add_terminal(const std::string& var, const std::string& symbol) {
    insert(var, SlpRule{true, symbol_index(symbol), "", "", 1});
  }
  void add_concat(const std::string& var, std::string left, int axis,
                  std::string right) {
    if (axis < 1 || axis > dim_) {
      throw std::invalid_argument("NdSLP: axis out of range for '" + var + "'");
    }
    insert(var, SlpRule{false, 0, std::move(left), std::move(right), axis});
  }
  void set_start(std::string var) { start_ = std::move(var); }

  bool has_var(const std::string& v) const { return index_.count(v) != 0; }
  std::size_t index_of(const std::string& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) throw std::invalid_argument("unknown variable: " + v);
    return it->second;
  }
  const SlpRule& rule(const std::string& v) const { return rules_[index_of(v)].second; }
  std::size_t var_count() const { return rules_.size(); }
  const std::pair<std::string, SlpRule>& var_at(std::size_t i) const {
    return rules_[i];
  }
  const std::string& start() const { return start_; }

  std::string fresh_var(const std::string& hint) const {
    if (!has_var(hint)) return hint;
    for (std::size_t i = 0;; ++i) {
      std::string cand = hint + "_" + std::to_string(i);
      if (!has_var(cand)) return cand;
    }
  }

  std::vector<std::size_t> topological_order() const {
    std::vector<int> indeg(rules_.size(), 0);
    std::vector<std::vector<std::size_t>> users(rules_.size());
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const auto& r = rules_[i].second;
      if (r.terminal) continue;
      for (const std::string* child : {&r.left, &r.right}) {
        auto it = index_.find(*child);
        if (it == index_.end()) {
          throw std::invalid_argument("variable '" + rules_[i].first +
                                      "' references unknown variable '" + *child +
                                      "'");
        }
        users[it->second].push_back(i);
        ++indeg[i];
      }
    }
    std::vector<std::size_t> ready, order;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
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
    if (order.size() != rules_.size()) {
      throw std::invalid_argument("SLP derivation relation is cyclic");
    }
    return order;
  }

  std::vector<std::string> validate() const;

  void require_valid() const {
    auto diags = validate();
    if (!diags.empty()) {
      std::string msg = "invalid SLP:";
      for (const auto& d : diags) msg += "\n  " + d;
      throw std::invalid_argument(msg);
    }
  }

 private:
  void insert(const std::string& var, SlpRule r) {
    if (var.empty()) throw std::invalid_argument("NdSLP: empty variable name");
    if (index_.count(var)) {
      throw std::invalid_argument("NdSLP: duplicate variable " + var);
    }
    index_[var] = rules_.size();
    rules_.emplace_back(var, std::move(r));
  }

  int dim_;
  std::vector<std::string> alphabet_;
  std::map<std::string, int> symbol_index_;
  std::vector<std::pair<std::string, SlpRule>> rules_;
  std::map<std::string, std::size_t> index_;
  std::string start_;
};

// The unique consistent length assignment |A|_i: terminals have all lengths
// one; a concatenation along axis i adds lengths there and requires equal
// lengths elsewhere. Throws naming the offending variable on mismatch.
inline std::map<std::string, std::vector<BigInt>> slp_lengths(const NdSLP& s) {
  const auto order = s.topological_order();
  std::map<std::string, std::vector<BigInt>> out;
  std::vector<std::vector<BigInt>> lens(s.var_count());
  for (std::size_t idx : order) {
    const auto& [name, r] = s.var_at(idx);
    if (r.terminal) {
      lens[idx].assign(static_cast<std::size_t>(s.dim()), BigInt(1));
    } else {
      const auto& lb = lens[s.index_of(r.left)];
      const auto& rb = lens[s.index_of(r.right)];
      lens[idx].resize(static_cast<std::size_t>(s.dim()));
      for (int j = 1; j <= s.dim(); ++j) {
        const std::size_t jj = static_cast<std::size_t>(j - 1);
        if (j == r.axis) {
          lens[idx][jj] = lb[jj] + rb[jj];
        } else {
          if (lb[jj] != rb[jj]) {
            throw std::invalid_argument(
                "variable '" + name + "': axis " + std::to_string(j) +
                " length mismatch (" + lb[jj].get_str() + " vs " +
                rb[jj].get_str() + ")");
          }
          lens[idx][jj] = lb[jj];
        }
      }
    }
    out[name] = lens[idx];
  }
  return out;
}

inline std::vector<std::string> NdSLP::validate() const {
  std::vector<std::string> diags;
  if (rules_.empty()) diags.push_back("SLP has no variables");
  if (start_.empty()) {
    diags.push_back("no start variable set");
  } else if (!has_var(start_)) {
    diags.push_back("start variable '" + start_ + "' is not defined");
  }
  bool refs_ok = true;
  for (const auto& [name, r] : rules_) {
    if (r.terminal) continue;
    for (const std::string* child : {&r.left, &r.right}) {
      if (!has_var(*child)) {
        diags.push_back("variable '" + name + "' references unknown variable '" +
                        *child + "'");
        refs_ok = false;
      }
    }
  }
  if (refs_ok && !rules_.empty()) {
    try {
      slp_lengths(*this);
    } catch (const std::invalid_argument& e) {
      diags.push_back(e.what());
    }
  }
  return diags;
}

// An explicit n-dimensional picture. Cells are stored row-major with the
// last axis fastest; coordinates are 1-based as in dom(p).
struct Picture {
  int dim = 1;
  std::vector<std::string> alphabet;
  std::vector<std::uint64_t> extents;
  std::vector<std::int32_t> cells;

  std::uint64_t cell_count() const {
    std::uint64_t n = 1;
    for (auto e : extents) n *= e;
    return n;
  }

  std::uint64_t offset(const std::vector<std::uint64_t>& coords) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < extents.size(); ++i) {
      idx = idx * extents[i] + (coords[i] - 1);
    }
    return idx;
  }

  const std::string& symbol_at(const std::vector<std::uint64_t>& coords) const {
    return alphabet[static_cast<std::size_t>(cells[offset(coords)])];
  }

  // Same picture up to symbol names (alphabets may be ordered differently).
  bool same_picture(const Picture& o) const {
    if (dim != o.dim || extents != o.extents) return false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (alphabet[static_cast<std::size_t>(cells[i])] !=
          o.alphabet[static_cast<std::size_t>(o.cells[i])]) {
        return false;
      }
    }
    return true;
  }
};

// Decompress val(s). Fails fast when the cell count exceeds the budget.
// Iterative descent: each frame fills one sub-box of the output, so the
// work is linear in the number of cells.
inline Picture slp_expand(const NdSLP& s, const BigInt& budget) {
  s.require_valid();
  const auto lengths = slp_lengths(s);
  const auto& start_len = lengths.at(s.start());

  BigInt total = 1;
  for (const auto& l : start_len) total *= l;
  if (total > budget) {
    throw BudgetExceeded("picture has " + total.get_str() +
                         " cells, budget is " + budget.get_str());
  }

  Picture pic;
  pic.dim = s.dim();
  pic.alphabet = s.alphabet();
  for (const auto& l : start_len) pic.extents.push_back(to_u64(l));
  pic.cells.assign(static_cast<std::size_t>(to_u64(total)), 0);

  struct Frame {
    std::size_t var;
    std::vector<std::uint64_t> base;  // 0-based offset of this sub-box
  };
  std::vector<Frame> stack;
  stack.push_back({s.index_of(s.start()),
                   std::vector<std::uint64_t>(static_cast<std::size_t>(s.dim()), 0)});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    const auto& [name, r] = s.var_at(fr.var);
    if (r.terminal) {
      std::uint64_t idx = 0;
      for (std::size_t i = 0; i < pic.extents.size(); ++i) {
        idx = idx * pic.extents[i] + fr.base[i];
      }
      pic.cells[static_cast<std::size_t>(idx)] = static_cast<std::int32_t>(r.symbol);
      continue;
    }
    const std::size_t li = s.index_of(r.left), ri = s.index_of(r.right);
    Frame right{ri, fr.base};
    right.base[static_cast<std::size_t>(r.axis - 1)] +=
        to_u64(lengths.at(r.left)[static_cast<std::size_t>(r.axis - 1)]);
    stack.push_back(std::move(right));
    stack.push_back({li, std::move(fr.base)});
  }
  return pic;
}

// Re-encode over {0,1}: symbol a_i (1-based position in the declared
// alphabet) becomes the width-k block 0^i 1^{k-i} along axis 1. An SLP that
// is already over {0,1} is passed through unchanged.
inline NdSLP encode_binary(const NdSLP& s) {
  s.require_valid();
  const auto& sigma = s.alphabet();
  const bool already_binary =
      (sigma.size() == 1 && (sigma[0] == "0" || sigma[0] == "1")) ||
      (sigma.size() == 2 &&
       ((sigma[0] == "0" && sigma[1] == "1") || (sigma[0] == "1" && sigma[1] == "0")));

  NdSLP out(s.dim(), {"0", "1"});
  if (already_binary) {
    for (std::size_t i = 0; i < s.var_count(); ++i) {
      const auto& [name, r] = s.var_at(i);
      if (r.terminal) out.add_terminal(name, sigma[static_cast<std::size_t>(r.symbol)]);
      else out.add_concat(name, r.left, r.axis, r.right);
    }
    out.set_start(s.start());
    return out;
  }

  const std::size_t k = sigma.size();
  const std::string bit0 = out.fresh_var("@b0"), bit1 = out.fresh_var("@b1");
  out.add_terminal(bit0, "0");
  out.add_terminal(bit1, "1");
  // code chain for each symbol: 0^i 1^{k-i}
  std::vector<std::string> code_var(k);
  for (std::size_t i = 1; i <= k; ++i) {
    std::string acc = bit0;
    for (std::size_t j = 2; j <= k; ++j) {
      const std::string next = j <= i ? bit0 : bit1;
      std::string v = out.fresh_var("@c" + std::to_string(i) + "_" + std::to_string(j));
      out.add_concat(v, acc, 1, next);
      acc = v;
    }
    code_var[i - 1] = acc;
  }

  // Copy the grammar; terminals become aliases of their code chains.
  // The rename map is complete before any rule is emitted, so forward
  // references resolve correctly. User variables only need renaming when
  // they collide with the generated '@' names.
  std::map<std::string, std::string> rename;
  std::size_t rc = 0;
  for (std::size_t i = 0; i < s.var_count(); ++i) {
    const auto& [name, r] = s.var_at(i);
    if (r.terminal) {
      rename[name] = code_var[static_cast<std::size_t>(r.symbol)];
    } else if (out.has_var(name)) {
      std::string cand;
      do {
        cand = "@r" + std::to_string(rc++);
      } while (out.has_var(cand) || s.has_var(cand));
      rename[name] = cand;
    }
  }
  auto mapped = [&rename](const std::string& v) {
    auto it = rename.find(v);
    return it == rename.end() ? v : it->second;
  };
  for (std::size_t i = 0; i < s.var_count(); ++i) {
    const auto& [name, r] = s.var_at(i);
    if (r.terminal) continue;
    out.add_concat(mapped(name), mapped(r.left), r.axis, mapped(r.right));
  }
  out.set_start(mapped(s.start()));
  return out;
}

// The equality polynomial circuit over F_2 in dim variables: for each SLP,
// a terminal contributes its bit as a constant and a concatenation along
// axis i contributes B + x_i^{|B|_i} * C; the output adds both start
// polynomials. The circuit value is f_{val(s1)} + f_{val(s2)}, which is
// zero iff the pictures are equal (lengths must already agree). Cell
// (e_1..e_n) contributes prod x_i^{e_i - 1}: 0-based exponents, so the
// first cell is the constant term.
inline PowerfulSkewCircuit to_poly_circuit(const NdSLP& s1, const NdSLP& s2) {
  if (s1.dim() != s2.dim()) {
    throw std::invalid_argument("to_poly_circuit: dimension mismatch");
  }
  for (const NdSLP* s : {&s1, &s2}) {
    if (s->alphabet() != std::vector<std::string>{"0", "1"}) {
      throw std::invalid_argument("to_poly_circuit: SLPs must be over {0,1}");
    }
  }
  const int n = s1.dim();
  const RingSpec ring = RingSpec::fp(2);
  PowerfulSkewCircuit c(ring, n);

  const NdSLP* slps[2] = {&s1, &s2};
  const char* prefix[2] = {"L:", "R:"};
  for (int side = 0; side < 2; ++side) {
    const NdSLP& s = *slps[side];
    const auto lengths = slp_lengths(s);
    for (std::size_t i = 0; i < s.var_count(); ++i) {
      const auto& [name, r] = s.var_at(i);
      const std::string gname = prefix[side] + name;
      if (r.terminal) {
        const std::string& sym = s.alphabet()[static_cast<std::size_t>(r.symbol)];
        c.add_input(gname, sym == "1"
                               ? SparsePolyBig::constant(ring, n, 1)
                               : SparsePolyBig::zero(ring, n));
      } else {
        std::vector<BigInt> exps(static_cast<std::size_t>(n), 0);
        exps[static_cast<std::size_t>(r.axis - 1)] =
            lengths.at(r.left)[static_cast<std::size_t>(r.axis - 1)];
        c.add_input(gname + ":x", SparsePolyBig::monomial(ring, n, 1, exps));
        c.add_mul(gname + ":m", gname + ":x", prefix[side] + r.right);
        c.add_add(gname, prefix[side] + r.left, gname + ":m");
      }
    }
  }
  c.add_add("__sum", std::string("L:") + s1.start(), std::string("R:") + s2.start());
  c.set_output("__sum");
  return c;
}

struct SlpEqualResult {
  bool equal = false;
  bool length_mismatch = false;
  std::optional<PitResult> pit;
};

// Randomized picture equality: encode over {0,1}, compare lengths, then run
// the identity test on the difference circuit. "not-equal" is always
// correct; "equal" can err with probability at most (1-epsilon)^trials.
inline SlpEqualResult slp_equal(const NdSLP& s1, const NdSLP& s2,
                                const PitParams& params) {
  if (s1.dim() != s2.dim()) {
    throw std::invalid_argument("slp_equal: dimension mismatch");
  }
  if (s1.alphabet() != s2.alphabet()) {
    throw std::invalid_argument("slp_equal: alphabet mismatch");
  }
  const NdSLP e1 = encode_binary(s1);
  const NdSLP e2 = encode_binary(s2);
  const auto l1 = slp_lengths(e1), l2 = slp_lengths(e2);
  if (l1.at(e1.start()) != l2.at(e2.start())) {
    return SlpEqualResult{false, true, std::nullopt};
  }
  SlpEqualResult res;
  res.pit = pit_fp(to_poly_circuit(e1, e2), params);
  res.equal = res.pit->zero;
  return res;
}

// ---- text format -------------------------------------------------------
//
//   DIM 2
//   ALPHABET a b
//   A -> 'a'
//   S -> A .1 B
//   START S

inline NdSLP parse_slp(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  std::optional<int> dim;
  std::vector<std::string> alphabet;
  std::string start;
  struct RuleLine {
    std::size_t no;
    std::string var, a, b, c;  // terminal: a = 'sym'; concat: a .i c
    bool terminal;
    int axis = 1;
  };
  std::vector<RuleLine> rule_lines;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == "DIM") {
      int d;
      if (!(ls >> d) || d < 1) throw ParseError(lineno, "DIM needs a positive integer");
      dim = d;
    } else if (tok == "ALPHABET") {
      std::string sym;
      while (ls >> sym) alphabet.push_back(sym);
      if (alphabet.empty()) throw ParseError(lineno, "ALPHABET needs symbols");
    } else if (tok == "START") {
      if (!(ls >> start)) throw ParseError(lineno, "START needs a variable");
    } else {
      // rule: VAR -> 'a'   or   VAR -> B .i C
      std::string arrow;
      if (!(ls >> arrow) || arrow != "->") {
        throw ParseError(lineno, "expected '<var> -> ...'");
      }
      std::string first;
      if (!(ls >> first)) throw ParseError(lineno, "rule needs a right-hand side");
      RuleLine rl;
      rl.no = lineno;
      rl.var = tok;
      if (first.size() >= 2 && first.front() == '\'' && first.back() == '\'') {
        rl.terminal = true;
        rl.a = first.substr(1, first.size() - 2);
        if (rl.a.empty()) throw ParseError(lineno, "empty terminal symbol");
      } else {
        rl.terminal = false;
        rl.a = first;
        std::string axis_tok;
        if (!(ls >> axis_tok >> rl.c) || axis_tok.size() < 2 || axis_tok[0] != '.') {
          throw ParseError(lineno, "expected '<var> -> B .<axis> C'");
        }
        const std::string digits = axis_tok.substr(1);
        if (digits.find_first_not_of("0123456789") != std::string::npos ||
            digits.empty()) {
          throw ParseError(lineno, "bad axis '" + axis_tok + "'");
        }
        rl.axis = std::stoi(digits);
      }
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "unexpected trailing text");
      rule_lines.push_back(std::move(rl));
    }
  }
  if (!dim) throw ParseError(lineno, "missing DIM line");
  if (alphabet.empty()) throw ParseError(lineno, "missing ALPHABET line");
  if (start.empty()) throw ParseError(lineno, "missing START line");

  NdSLP s(*dim, alphabet);
  for (const auto& rl : rule_lines) {
    try {
      if (rl.terminal) s.add_terminal(rl.var, rl.a);
      else s.add_concat(rl.var, rl.a, rl.axis, rl.c);
    } catch (const std::invalid_argument& e) {
      throw ParseError(rl.no, e.what());
    }
  }
  s.set_start(start);
  return s;
}

inline std::string print_slp(const NdSLP& s) {
  std::string out = "DIM " + std::to_string(s.dim()) + "\n";
  out += "ALPHABET";
  for (const auto& sym : s.alphabet()) out += " " + sym;
  out += "\n";
  for (std::size_t i = 0; i < s.var_count(); ++i) {
    const auto& [name, r] = s.var_at(i);
    if (r.terminal) {
      out += name + " -> '" + s.alphabet()[static_cast<std::size_t>(r.symbol)] + "'\n";
    } else {
      out += name + " -> " + r.left + " ." + std::to_string(r.axis) + " " +
             r.right + "\n";
    }
  }
  out += "START " + s.start() + "\n";
  return out;
}

}  // namespace pskew
