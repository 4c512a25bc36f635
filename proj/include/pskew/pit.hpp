#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pskew/bigint.hpp"
#include "pskew/circuit.hpp"
#include "pskew/eval_mod.hpp"
#include "pskew/residue.hpp"
#include "pskew/rng.hpp"

namespace pskew {

// Error parameter epsilon = num/den, 0 < epsilon < 1.
struct Rational {
  std::uint64_t num = 1;
  std::uint64_t den = 2;

  void validate() const {
    if (num == 0 || den == 0 || num >= den) {
      throw std::invalid_argument("epsilon must satisfy 0 < epsilon < 1");
    }
  }
  std::uint64_t ceil_inverse() const { return (den + num - 1) / num; }
  std::string to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == s.size()) {
      throw std::invalid_argument("epsilon must be a fraction num/den");
    }
    Rational r{std::stoull(s.substr(0, slash)), std::stoull(s.substr(slash + 1))};
    r.validate();
    return r;
  }
};

struct PitParams {
  Rational epsilon{1, 2};
  std::uint32_t trials = 40;
  std::uint64_t seed = 0;

  void validate() const {
    epsilon.validate();
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  }
};

// Everything one accept/reject trial depends on, for reproducibility checks.
struct TrialTranscript {
  std::uint64_t prime = 0;
  std::uint64_t ell = 0;
  std::uint64_t t = 0;
  std::uint64_t r = 0;
  std::vector<std::uint8_t> b;
  bool accepted = false;
};

struct PitResult {
  bool zero = false;
  RingSpec ring;
  PitParams params;
  std::vector<TrialTranscript> transcripts;
};

// ell >= log2(degree bound): the bit length of the bound, at least 1.
inline std::uint64_t choose_ell(const PowerfulSkewCircuit& univariate) {
  if (univariate.num_vars() != 1) {
    throw std::invalid_argument("choose_ell: circuit is not univariate");
  }
  const BigInt bound = univariate.degree_bound(1);
  const std::size_t bits = bit_length(bound);
  return bits == 0 ? 1 : static_cast<std::uint64_t>(bits);
}

// Smallest prime r != p with r not dividing any of p-1, ..., p^{ell-1}-1.
// r is O(ell^2 log p); the search is capped at cap_constant * ell^2 *
// max(1, bitlen p) and blowing the cap is reported as an internal error.
inline std::uint64_t find_r(std::uint64_t p, std::uint64_t ell,
                            std::uint64_t cap_constant = 64) {
  if (ell < 1) throw std::invalid_argument("find_r: ell must be >= 1");
  const BigInt cap = BigInt(static_cast<unsigned long>(cap_constant)) *
                     BigInt(static_cast<unsigned long>(ell)) *
                     BigInt(static_cast<unsigned long>(ell)) *
                     BigInt(static_cast<unsigned long>(
                         std::max<std::size_t>(1, bit_length(BigInt(
                             static_cast<unsigned long>(p))))));
  for (std::uint64_t r = 2;; ++r) {
    if (BigInt(static_cast<unsigned long>(r)) > cap) {
      throw std::runtime_error(
          "find_r: search cap exceeded for p=" + std::to_string(p) +
          ", ell=" + std::to_string(ell) + " (internal error)");
    }
    if (r == p || !is_prime_u64(r)) continue;
    bool ok = true;
    std::uint64_t s = 1;
    const std::uint64_t pr = p % r;
    for (std::uint64_t i = 1; i < ell; ++i) {
      s = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(s) * pr) % r);
      if (s == 1) {  // r divides p^i - 1
        ok = false;
        break;
      }
    }
    if (ok) return r;
  }
}

// One Agrawal-Biswas trial with a caller-chosen b: build T_{r,b,t}, reduce
// the circuit value, accept iff the remainder is zero.
inline TrialTranscript run_trial_with_b(const PowerfulSkewCircuit& univariate_fp,
                                        std::uint64_t ell, std::uint64_t t,
                                        std::uint64_t r,
                                        std::vector<std::uint8_t> b) {
  const PrimeField field(univariate_fp.ring().p);
  TrialTranscript tr;
  tr.prime = field.modulus();
  tr.ell = ell;
  tr.t = t;
  tr.r = r;
  tr.b = std::move(b);
  const ResidueCtx ctx = build_test_modulus(r, tr.b, t, field);
  tr.accepted = eval_mod(univariate_fp, ctx).is_zero();
  return tr;
}

// Draw b uniformly from {0,1}^ell and run one trial.
inline TrialTranscript run_trial(const PowerfulSkewCircuit& univariate_fp,
                                 std::uint64_t ell, std::uint64_t t,
                                 std::uint64_t r, SplitMix64& rng) {
  std::vector<std::uint8_t> b(static_cast<std::size_t>(ell));
  for (auto& bit : b) bit = rng.next_bit() ? 1 : 0;
  return run_trial_with_b(univariate_fp, ell, t, r, std::move(b));
}

// Identity test over F_p. Multivariate circuits go through the Kronecker
// substitution first. ell, t and r are fixed once per circuit; b is drawn
// fresh per trial from substream(seed, stream_salt, trial). A reject is
// conclusive, so trials stop at the first one; zero is reported only after
// all `trials` accepts.
inline PitResult pit_fp(const PowerfulSkewCircuit& c, const PitParams& params,
                        std::uint64_t stream_salt = 0) {
  params.validate();
  if (!c.ring().is_fp()) throw std::invalid_argument("pit_fp: circuit not over F_p");
  c.require_valid();
  const PowerfulSkewCircuit univariate =
      c.num_vars() == 1 ? c : kronecker_substitute(c).circuit;

  const std::uint64_t ell = choose_ell(univariate);
  const std::uint64_t t = std::max(ell, params.epsilon.ceil_inverse());
  const std::uint64_t r = find_r(c.ring().p, ell);

  PitResult res;
  res.ring = c.ring();
  res.params = params;
  res.zero = true;
  for (std::uint32_t i = 0; i < params.trials; ++i) {
    SplitMix64 rng = substream(params.seed, stream_salt, i);
    res.transcripts.push_back(run_trial(univariate, ell, t, r, rng));
    if (!res.transcripts.back().accepted) {
      res.zero = false;
      break;
    }
  }
  return res;
}

// Structural bound B with |every coefficient of val(c)| <= 2^B, by bounding
// the l1 norm: inputs contribute max|a| * #monomials, Add adds one bit,
// Mul adds the operand bounds.
inline BigInt coefficient_bitlen_bound(const PowerfulSkewCircuit& c) {
  const auto order = c.topological_order();
  std::vector<BigInt> bound(c.gate_count(), 0);
  for (std::size_t idx : order) {
    const auto& g = c.gate_at(idx).second;
    switch (g.op) {
      case CircuitGate::Op::input: {
        BigInt max_abs = 0;
        for (const auto& m : g.poly->monomials()) {
          BigInt a = abs(m.coeff);
          if (a > max_abs) max_abs = a;
        }
        const BigInt l1 = max_abs * static_cast<unsigned long>(
                                        g.poly->monomials().size());
        bound[idx] = static_cast<unsigned long>(bit_length(l1));
        break;
      }
      case CircuitGate::Op::add:
        bound[idx] =
            std::max(bound[c.index_of(g.lhs)], bound[c.index_of(g.rhs)]) + 1;
        break;
      case CircuitGate::Op::mul:
        bound[idx] = bound[c.index_of(g.lhs)] + bound[c.index_of(g.rhs)];
        break;
    }
  }
  return bound[c.index_of(c.output())];
}

// First k primes whose product exceeds 2^{B+1}.
inline std::vector<std::uint64_t> select_primes(const BigInt& coeff_bitlen) {
  if (sgn(coeff_bitlen) < 0 || !fits_u64(coeff_bitlen + 1)) {
    throw std::invalid_argument("select_primes: unusable coefficient bound");
  }
  BigInt threshold = 1;
  mpz_mul_2exp(threshold.get_mpz_t(), threshold.get_mpz_t(),
               to_u64(coeff_bitlen) + 1);
  std::vector<std::uint64_t> primes;
  BigInt product = 1;
  for (std::uint64_t n = 2; product <= threshold; ++n) {
    if (!is_prime_u64(n)) continue;
    primes.push_back(n);
    product *= static_cast<unsigned long>(n);
  }
  return primes;
}

// Identity test over Z: reduce modulo the first k primes (product large
// enough to be conclusive by CRT) and test each residue circuit over F_p.
inline PitResult pit_z(const PowerfulSkewCircuit& c, const PitParams& params,
                       std::uint64_t stream_salt = 0) {
  params.validate();
  if (c.ring().is_fp()) throw std::invalid_argument("pit_z: circuit not over Z");
  c.require_valid();

  const BigInt bound = coefficient_bitlen_bound(c);
  const std::vector<std::uint64_t> primes = select_primes(bound);

  PitResult res;
  res.ring = c.ring();
  res.params = params;
  res.zero = true;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const PowerfulSkewCircuit cp = reduce_mod_prime(c, primes[i]);
    const std::uint64_t child_salt =
        mix64(stream_salt ^ (0x9E3779B97F4A7C15ULL * (i + 1)));
    PitResult sub = pit_fp(cp, params, child_salt);
    for (auto& tr : sub.transcripts) res.transcripts.push_back(std::move(tr));
    if (!sub.zero) {
      res.zero = false;
      break;
    }
  }
  return res;
}

// Dispatch on the circuit's coefficient ring.
inline PitResult pit(const PowerfulSkewCircuit& c, const PitParams& params,
                     std::uint64_t stream_salt = 0) {
  return c.ring().is_fp() ? pit_fp(c, params, stream_salt)
                          : pit_z(c, params, stream_salt);
}

inline nlohmann::ordered_json transcript_to_json(const TrialTranscript& tr) {
  std::string bits;
  for (auto bit : tr.b) bits += bit ? '1' : '0';
  nlohmann::ordered_json j;
  j["prime"] = tr.prime;
  j["ell"] = tr.ell;
  j["t"] = tr.t;
  j["r"] = tr.r;
  j["b"] = bits;
  j["accepted"] = tr.accepted;
  return j;
}

inline nlohmann::ordered_json pit_result_to_json(const PitResult& res) {
  nlohmann::ordered_json j;
  j["verdict"] = res.zero ? "zero" : "nonzero";
  j["ring"] = res.ring.to_string();
  j["epsilon"] = res.params.epsilon.to_string();
  j["trials"] = res.params.trials;
  j["seed"] = res.params.seed;
  j["transcripts"] = nlohmann::ordered_json::array();
  for (const auto& tr : res.transcripts) {
    j["transcripts"].push_back(transcript_to_json(tr));
  }
  return j;
}

}  // namespace pskew
