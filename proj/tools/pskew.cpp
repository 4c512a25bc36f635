// pskew: identity testing for powerful skew circuits, SLP picture equality,
// and compressed word problems for wreath products.
//
// Exit codes: 0 zero/equal/identity (and plain success for expand, simulate
// and convert), 1 nonzero/not-equal/not-identity, 2 usage or parse error,
// 3 oracle budget exceeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pskew/branching.hpp"
#include "pskew/circuit.hpp"
#include "pskew/error.hpp"
#include "pskew/group.hpp"
#include "pskew/oracle.hpp"
#include "pskew/pit.hpp"
#include "pskew/slp.hpp"
#include "pskew/wreath.hpp"

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct CommonOpts {
  std::string epsilon = "1/2";
  std::uint32_t trials = 40;
  std::uint64_t seed = 0;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--epsilon", opts.epsilon, "error parameter as a fraction num/den");
  cmd->add_option("--trials", opts.trials, "number of independent trials");
  cmd->add_option("--seed", opts.seed, "RNG seed (fixed default for reproducibility)");
  cmd->add_flag("--json", opts.json, "emit machine-readable JSON");
}

pskew::PitParams make_params(const CommonOpts& opts) {
  pskew::PitParams params;
  params.epsilon = pskew::Rational::parse(opts.epsilon);
  params.trials = opts.trials;
  params.seed = opts.seed;
  params.validate();
  return params;
}

int run_pit(const std::string& path, const std::string& ring_str,
            const CommonOpts& opts) {
  const auto ring = pskew::RingSpec::parse(ring_str);
  const auto circuit = pskew::parse_circuit(read_file(path), ring);
  circuit.require_valid();
  const auto res = pskew::pit(circuit, make_params(opts));
  if (opts.json) {
    std::cout << pskew::pit_result_to_json(res).dump(2) << "\n";
  } else {
    std::cout << "verdict: " << (res.zero ? "zero" : "nonzero") << "\n";
  }
  return res.zero ? 0 : 1;
}

int run_slp_eq(const std::string& path1, const std::string& path2,
               const CommonOpts& opts) {
  const auto s1 = pskew::parse_slp(read_file(path1));
  const auto s2 = pskew::parse_slp(read_file(path2));
  const auto res = pskew::slp_equal(s1, s2, make_params(opts));
  if (opts.json) {
    ordered_json j;
    j["verdict"] = res.equal ? "equal" : "not-equal";
    j["reason"] = res.length_mismatch ? "length-mismatch" : "pit";
    if (res.pit) {
      const auto pj = pskew::pit_result_to_json(*res.pit);
      for (auto it = pj.begin(); it != pj.end(); ++it) {
        if (it.key() != "verdict") j[it.key()] = it.value();
      }
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "verdict: " << (res.equal ? "equal" : "not-equal");
    if (res.length_mismatch) std::cout << " (length mismatch)";
    std::cout << "\n";
  }
  return res.equal ? 0 : 1;
}

int run_cwp(const std::string& path, const std::string& group,
            const CommonOpts& opts) {
  const auto spec = pskew::GroupSpec::parse(group);
  const auto word = pskew::parse_slp(read_file(path));
  const auto params = make_params(opts);
  const auto res = pskew::cwp(word, spec, params);
  if (opts.json) {
    ordered_json j;
    j["verdict"] = res.identity ? "identity" : "not-identity";
    j["group"] = spec.to_string();
    j["epsilon"] = params.epsilon.to_string();
    j["trials"] = params.trials;
    j["seed"] = params.seed;
    j["delta"] = res.delta.get_str();
    j["factors"] = ordered_json::array();
    for (const auto& f : res.factors) {
      ordered_json fj;
      fj["factor"] = f.factor;
      fj["ring"] = f.ring.to_string();
      fj["verdict"] = f.pit.zero ? "zero" : "nonzero";
      fj["transcripts"] = ordered_json::array();
      for (const auto& tr : f.pit.transcripts) {
        fj["transcripts"].push_back(pskew::transcript_to_json(tr));
      }
      j["factors"].push_back(std::move(fj));
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "verdict: " << (res.identity ? "identity" : "not-identity")
              << "\n";
  }
  return res.identity ? 0 : 1;
}

void print_picture(const pskew::Picture& pic, bool json) {
  if (json) {
    ordered_json j;
    j["kind"] = "picture";
    j["dim"] = pic.dim;
    j["extents"] = ordered_json::array();
    for (auto e : pic.extents) j["extents"].push_back(e);
    j["cells"] = ordered_json::array();
    for (auto c : pic.cells) {
      j["cells"].push_back(pic.alphabet[static_cast<std::size_t>(c)]);
    }
    std::cout << j.dump(2) << "\n";
    return;
  }
  bool compact = true;
  for (const auto& sym : pic.alphabet) {
    if (sym.size() != 1) compact = false;
  }
  const std::string sep = compact ? "" : " ";
  if (pic.dim == 1) {
    for (std::size_t i = 0; i < pic.cells.size(); ++i) {
      if (i) std::cout << sep;
      std::cout << pic.alphabet[static_cast<std::size_t>(pic.cells[i])];
    }
    std::cout << "\n";
  } else if (pic.dim == 2) {
    const std::uint64_t rows = pic.extents[0], cols = pic.extents[1];
    for (std::uint64_t r = 0; r < rows; ++r) {
      for (std::uint64_t c = 0; c < cols; ++c) {
        if (c) std::cout << sep;
        std::cout << pic.alphabet[static_cast<std::size_t>(
            pic.cells[static_cast<std::size_t>(r * cols + c)])];
      }
      std::cout << "\n";
    }
  } else {
    // one cell per line with 1-based coordinates
    std::vector<std::uint64_t> coords(static_cast<std::size_t>(pic.dim), 1);
    for (std::size_t idx = 0; idx < pic.cells.size(); ++idx) {
      std::cout << "CELL";
      for (auto c : coords) std::cout << " " << c;
      std::cout << " " << pic.alphabet[static_cast<std::size_t>(pic.cells[idx])]
                << "\n";
      for (std::size_t a = coords.size(); a-- > 0;) {
        if (++coords[a] <= pic.extents[a]) break;
        coords[a] = 1;
      }
    }
  }
}

int run_expand(const std::string& path, std::string kind,
               const std::string& ring_str, std::uint64_t monomial_budget,
               std::uint64_t cell_budget, bool json) {
  if (kind.empty()) {
    kind = ends_with(path, ".slp") ? "slp" : "circuit";
  }
  if (kind == "circuit") {
    const auto ring = pskew::RingSpec::parse(ring_str);
    const auto circuit = pskew::parse_circuit(read_file(path), ring);
    const auto exp = pskew::expand_circuit(circuit, monomial_budget);
    const std::string text = exp.to_sparse().to_string();
    if (json) {
      ordered_json j;
      j["kind"] = "polynomial";
      j["ring"] = ring.to_string();
      j["monomials"] = exp.support_size();
      j["text"] = text;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << text << "\n";
    }
    return 0;
  }
  if (kind == "slp") {
    const auto slp = pskew::parse_slp(read_file(path));
    const auto pic = pskew::slp_expand(slp, pskew::BigInt(
                                                static_cast<unsigned long>(cell_budget)));
    print_picture(pic, json);
    return 0;
  }
  throw CLI::ValidationError("--kind must be circuit or slp");
}

int run_simulate(const std::string& path, const std::string& group,
                 std::uint64_t symbol_budget) {
  const auto spec = pskew::GroupSpec::parse(group);
  const auto slp = pskew::parse_slp(read_file(path));
  const auto pic = pskew::slp_expand(
      slp, pskew::BigInt(static_cast<unsigned long>(symbol_budget)));
  std::vector<std::string> word;
  for (auto c : pic.cells) {
    word.push_back(pic.alphabet[static_cast<std::size_t>(c)]);
  }
  const auto elem = pskew::simulate_word(word, spec, symbol_budget);
  ordered_json j = pskew::wreath_elem_to_json(elem);
  j["identity"] = pskew::is_identity(elem);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_convert(const std::string& path, const std::string& to,
                const std::string& ring_str) {
  const auto ring = pskew::RingSpec::parse(ring_str);
  const bool is_bp = ends_with(path, ".bp");
  if (to == "bp") {
    const auto circuit = pskew::parse_circuit(read_file(path), ring);
    std::cout << pskew::print_bp(pskew::circuit_to_bp(circuit));
    return 0;
  }
  if (to == "circuit") {
    if (!is_bp) {
      throw CLI::ValidationError("convert --to circuit expects a .bp input");
    }
    const auto bp = pskew::parse_bp(read_file(path), ring);
    std::cout << pskew::print_circuit(pskew::bp_to_circuit(bp));
    return 0;
  }
  if (to == "wordslp") {
    const auto circuit = pskew::parse_circuit(read_file(path), ring);
    std::cout << pskew::print_slp(pskew::circuit_to_wordslp(circuit));
    return 0;
  }
  throw CLI::ValidationError("--to must be bp, circuit or wordslp");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identity testing for powerful skew circuits and friends"};
  app.require_subcommand(1);

  // pit
  auto* pit_cmd = app.add_subcommand("pit", "test whether a circuit value is zero");
  std::string pit_file, pit_ring = "z";
  CommonOpts pit_opts;
  pit_cmd->add_option("file", pit_file, "circuit file")->required();
  pit_cmd->add_option("--ring", pit_ring, "coefficient ring: z or fp:<p>");
  add_common(pit_cmd, pit_opts);

  // slp-eq
  auto* eq_cmd = app.add_subcommand("slp-eq", "test picture equality of two SLPs");
  std::string eq_file1, eq_file2;
  CommonOpts eq_opts;
  eq_cmd->add_option("first", eq_file1, "first SLP file")->required();
  eq_cmd->add_option("second", eq_file2, "second SLP file")->required();
  add_common(eq_cmd, eq_opts);

  // cwp
  auto* cwp_cmd = app.add_subcommand(
      "cwp", "compressed word problem for G wr Z^k");
  std::string cwp_file, cwp_group;
  CommonOpts cwp_opts;
  cwp_cmd->add_option("file", cwp_file, "word SLP file")->required();
  cwp_cmd->add_option("--group", cwp_group, "group, e.g. \"Z wr Z^2\" or \"ZxZ_2 wr Z\"")
      ->required();
  add_common(cwp_cmd, cwp_opts);

  // expand
  auto* ex_cmd = app.add_subcommand("expand", "brute-force expansion oracle");
  std::string ex_file, ex_kind, ex_ring = "z";
  std::uint64_t monomial_budget = 10000, cell_budget = 100000;
  bool ex_json = false;
  ex_cmd->add_option("file", ex_file, "circuit (.circ) or SLP (.slp) file")->required();
  ex_cmd->add_option("--kind", ex_kind, "circuit or slp (default: by extension)");
  ex_cmd->add_option("--ring", ex_ring, "coefficient ring for circuits");
  ex_cmd->add_option("--monomial-budget", monomial_budget, "max monomials");
  ex_cmd->add_option("--cell-budget", cell_budget, "max picture cells");
  ex_cmd->add_flag("--json", ex_json, "emit JSON");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "explicit wreath-product simulation");
  std::string sim_file, sim_group;
  std::uint64_t symbol_budget = 100000;
  sim_cmd->add_option("file", sim_file, "word SLP file")->required();
  sim_cmd->add_option("--group", sim_group, "group spec")->required();
  sim_cmd->add_option("--symbol-budget", symbol_budget, "max word length");

  // convert
  auto* conv_cmd = app.add_subcommand("convert", "convert between representations");
  std::string conv_file, conv_to, conv_ring = "z";
  conv_cmd->add_option("file", conv_file, "input file (.circ or .bp)")->required();
  conv_cmd->add_option("--to", conv_to, "bp, circuit or wordslp")->required();
  conv_cmd->add_option("--ring", conv_ring, "coefficient ring");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pit_cmd->parsed()) return run_pit(pit_file, pit_ring, pit_opts);
    if (eq_cmd->parsed()) return run_slp_eq(eq_file1, eq_file2, eq_opts);
    if (cwp_cmd->parsed()) return run_cwp(cwp_file, cwp_group, cwp_opts);
    if (ex_cmd->parsed()) {
      return run_expand(ex_file, ex_kind, ex_ring, monomial_budget, cell_budget,
                        ex_json);
    }
    if (sim_cmd->parsed()) return run_simulate(sim_file, sim_group, symbol_budget);
    if (conv_cmd->parsed()) return run_convert(conv_file, conv_to, conv_ring);
  } catch (const pskew::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const pskew::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
