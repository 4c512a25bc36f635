#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pskew/prime_field.hpp"

namespace pskew {

// One factor of the base group G: Z or Z_p with p prime (composite moduli
// are rejected at validation; their identity test is out of reach).
struct GroupFactor {
  bool is_z = true;
  std::uint64_t p = 0;
};

// The wreath product G wr Z^k with G a finite direct product of copies of
// Z and Z_p.
struct GroupSpec {
  std::vector<GroupFactor> factors;
  std::uint32_t cursor_rank = 1;  // the k of Z^k

  void validate() const {
    if (factors.empty()) throw std::invalid_argument("group: no base factors");
    if (cursor_rank < 1) throw std::invalid_argument("group: need k >= 1");
    for (const auto& f : factors) {
      if (!f.is_z && !is_prime_u64(f.p)) {
        throw std::invalid_argument(
            "group: Z_" + std::to_string(f.p) +
            " has composite modulus; only prime moduli are supported");
      }
    }
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += "x";
      out += factors[i].is_z ? "Z" : "Z_" + std::to_string(factors[i].p);
    }
    out += " wr Z";
    if (cursor_rank != 1) out += "^" + std::to_string(cursor_rank);
    return out;
  }

  // Grammar: (Z|Z_<p>)(x(Z|Z_<p>))* wr Z^<k>, with "Z" short for "Z^1".
  static GroupSpec parse(const std::string& text) {
    const auto wr = text.find(" wr ");
    if (wr == std::string::npos) {
      throw std::invalid_argument("group: expected '<base> wr Z^<k>'");
    }
    GroupSpec spec;
    std::string base = text.substr(0, wr);
    std::string right = text.substr(wr + 4);

    auto parse_factor = [](const std::string& tok) {
      if (tok == "Z") return GroupFactor{true, 0};
      if (tok.rfind("Z_", 0) == 0) {
        const std::string digits = tok.substr(2);
        if (digits.empty() ||
            digits.find_first_not_of("0123456789") != std::string::npos) {
          throw std::invalid_argument("group: bad factor '" + tok + "'");
        }
        return GroupFactor{false, std::stoull(digits)};
      }
      throw std::invalid_argument("group: bad factor '" + tok + "'");
    };

    std::size_t pos = 0;
    while (true) {
      auto x = base.find('x', pos);
      const std::string tok =
          x == std::string::npos ? base.substr(pos) : base.substr(pos, x - pos);
      spec.factors.push_back(parse_factor(tok));
      if (x == std::string::npos) break;
      pos = x + 1;
    }

    if (right == "Z") {
      spec.cursor_rank = 1;
    } else if (right.rfind("Z^", 0) == 0) {
      const std::string digits = right.substr(2);
      if (digits.empty() ||
          digits.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("group: bad right factor '" + right + "'");
      }
      spec.cursor_rank = static_cast<std::uint32_t>(std::stoul(digits));
    } else {
      throw std::invalid_argument("group: right factor must be Z or Z^<k>");
    }
    spec.validate();
    return spec;
  }
};

// A generator token for G wr Z^k. Cursor generators are a1..ak, coefficient
// generators g1..gm (one per factor of G); upper case means inverse. When
// k == 1 the alias a/A is accepted, and when m == 1 so is t/T.
struct Generator {
  bool is_cursor = false;
  std::uint32_t index = 1;  // 1-based
  int sign = 1;
};

inline Generator parse_generator(const std::string& tok, const GroupSpec& spec) {
  if (tok.empty()) throw std::invalid_argument("empty generator token");
  Generator g;
  char head = tok[0];
  const bool upper = head == 'A' || head == 'G' || head == 'T';
  g.sign = upper ? -1 : 1;
  char kind = static_cast<char>(upper ? head + 32 : head);
  std::string digits = tok.substr(1);
  if (kind == 't') {
    if (!digits.empty() || spec.factors.size() != 1) {
      throw std::invalid_argument("generator '" + tok +
                                  "': t alias needs a single base factor");
    }
    g.is_cursor = false;
    g.index = 1;
    return g;
  }
  if (kind != 'a' && kind != 'g') {
    throw std::invalid_argument("unknown generator '" + tok + "'");
  }
  g.is_cursor = kind == 'a';
  if (digits.empty()) {
    if (g.is_cursor && spec.cursor_rank != 1) {
      throw std::invalid_argument("generator '" + tok +
                                  "': a alias needs cursor rank 1");
    }
    g.index = 1;
  } else {
    if (digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("unknown generator '" + tok + "'");
    }
    g.index = static_cast<std::uint32_t>(std::stoul(digits));
  }
  const std::uint32_t limit =
      g.is_cursor ? spec.cursor_rank
                  : static_cast<std::uint32_t>(spec.factors.size());
  if (g.index < 1 || g.index > limit) {
    throw std::invalid_argument("generator '" + tok + "' out of range");
  }
  return g;
}

}  // namespace pskew
