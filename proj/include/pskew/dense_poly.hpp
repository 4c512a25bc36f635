#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pskew/prime_field.hpp"
#include "pskew/rings.hpp"

namespace pskew {

// Univariate polynomial in dense coefficient form over a coefficient ring R
// (IntRing or PrimeField). Canonical form: no trailing zero coefficient, so
// coeffs().size() == degree + 1 and coeffs().empty() iff the polynomial is 0.
template <class R>
class DensePoly {
 public:
  using Value = typename R::Value;

  explicit DensePoly(R ring) : ring_(std::move(ring)) {}

  static DensePoly zero(R ring) { return DensePoly(std::move(ring)); }

  static DensePoly one(R ring) { return constant(ring, ring.one()); }

  static DensePoly constant(R ring, Value c) {
    DensePoly p(std::move(ring));
    if (!p.ring_.is_zero(c)) p.coeffs_.push_back(std::move(c));
    return p;
  }

  static DensePoly monomial(R ring, Value c, std::size_t deg) {
    DensePoly p(std::move(ring));
    if (!p.ring_.is_zero(c)) {
      p.coeffs_.assign(deg + 1, p.ring_.zero());
      p.coeffs_[deg] = std::move(c);
    }
    return p;
  }

  static DensePoly from_coeffs(R ring, std::vector<Value> coeffs) {
    DensePoly p(std::move(ring));
    p.coeffs_ = std::move(coeffs);
    p.trim();
    return p;
  }

  const R& ring() const { return ring_; }
  bool is_zero() const { return coeffs_.empty(); }

  // Degree of a nonzero polynomial; the zero polynomial reports 0.
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  const std::vector<Value>& coeffs() const { return coeffs_; }

  Value coeff(std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : ring_.zero();
  }

  Value leading() const {
    if (coeffs_.empty()) return ring_.zero();
    return coeffs_.back();
  }

  bool is_monic() const {
    return !coeffs_.empty() && coeffs_.back() == ring_.one();
  }

  bool operator==(const DensePoly& o) const {
    return ring_ == o.ring_ && coeffs_ == o.coeffs_;
  }
  bool operator!=(const DensePoly& o) const { return !(*this == o); }

 private:
  void trim() {
    while (!coeffs_.empty() && ring_.is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  R ring_;
  std::vector<Value> coeffs_;
};

namespace detail {

template <class R>
void require_same_ring(const DensePoly<R>& a, const DensePoly<R>& b) {
  if (a.ring() != b.ring()) {
    throw std::invalid_argument("polynomial ring mismatch");
  }
}

}  // namespace detail

template <class R>
DensePoly<R> poly_add(const DensePoly<R>& a, const DensePoly<R>& b) {
  detail::require_same_ring(a, b);
  const R& ring = a.ring();
  std::vector<typename R::Value> out(std::max(a.coeffs().size(), b.coeffs().size()),
                                     ring.zero());
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) out[i] = a.coeffs()[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i)
    out[i] = ring.add(out[i], b.coeffs()[i]);
  return DensePoly<R>::from_coeffs(ring, std::move(out));
}

template <class R>
DensePoly<R> poly_neg(const DensePoly<R>& a) {
  const R& ring = a.ring();
  std::vector<typename R::Value> out(a.coeffs());
  for (auto& c : out) c = ring.neg(c);
  return DensePoly<R>::from_coeffs(ring, std::move(out));
}

template <class R>
DensePoly<R> poly_sub(const DensePoly<R>& a, const DensePoly<R>& b) {
  detail::require_same_ring(a, b);
  const R& ring = a.ring();
  std::vector<typename R::Value> out(std::max(a.coeffs().size(), b.coeffs().size()),
                                     ring.zero());
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) out[i] = a.coeffs()[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i)
    out[i] = ring.sub(out[i], b.coeffs()[i]);
  return DensePoly<R>::from_coeffs(ring, std::move(out));
}

template <class R>
DensePoly<R> poly_scale(const DensePoly<R>& a, const typename R::Value& s) {
  const R& ring = a.ring();
  std::vector<typename R::Value> out(a.coeffs());
  for (auto& c : out) c = ring.mul(c, s);
  return DensePoly<R>::from_coeffs(ring, std::move(out));
}

// Multiply by x^k.
template <class R>
DensePoly<R> poly_shift(const DensePoly<R>& a, std::size_t k) {
  if (a.is_zero() || k == 0) return a;
  std::vector<typename R::Value> out(a.coeffs().size() + k, a.ring().zero());
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) out[i + k] = a.coeffs()[i];
  return DensePoly<R>::from_coeffs(a.ring(), std::move(out));
}

namespace detail {

// ---- F_p coefficient kernels -----------------------------------------
//
// Coefficients live in uint64 with p < 2^31, so a product is < 2^62 and a
// handful of products can be accumulated before reduction. `lazy_chunk`
// says how many products fit in uint64 headroom.

inline std::size_t lazy_chunk(std::uint64_t p) {
  if (p <= 2) return std::size_t(1) << 62;
  const std::uint64_t prod = (p - 1) * (p - 1);
  std::uint64_t n = (std::numeric_limits<std::uint64_t>::max() - p) / prod;
  return n == 0 ? 1 : static_cast<std::size_t>(n);
}

inline void mul_acc_schoolbook(const std::uint64_t* a, std::size_t na,
                               const std::uint64_t* b, std::size_t nb,
                               std::uint64_t* out, std::uint64_t p) {
  // out has na + nb - 1 cells, already reduced (< p) on entry.
  const std::size_t chunk = lazy_chunk(p);
  std::size_t pending = 0;
  for (std::size_t i = 0; i < na; ++i) {
    const std::uint64_t ai = a[i];
    if (ai != 0) {
      std::uint64_t* row = out + i;
      for (std::size_t j = 0; j < nb; ++j) row[j] += ai * b[j];
    }
    if (++pending == chunk) {
      for (std::size_t k = 0; k < na + nb - 1; ++k) out[k] %= p;
      pending = 0;
    }
  }
  for (std::size_t k = 0; k < na + nb - 1; ++k) out[k] %= p;
}

constexpr std::size_t kKaratsubaThreshold = 48;

// out += result, all values < p.
inline void kara_rec(const std::uint64_t* a, std::size_t na,
                     const std::uint64_t* b, std::size_t nb, std::uint64_t* out,
                     std::uint64_t p) {
  if (na == 0 || nb == 0) return;
  if (na < kKaratsubaThreshold || nb < kKaratsubaThreshold) {
    // Schoolbook leaf, accumulating into reduced cells.
    std::vector<std::uint64_t> tmp(na + nb - 1, 0);
    mul_acc_schoolbook(a, na, b, nb, tmp.data(), p);
    for (std::size_t k = 0; k < tmp.size(); ++k) {
      std::uint64_t s = out[k] + tmp[k];
      out[k] = s >= p ? s - p : s;
    }
    return;
  }
  const std::size_t m = std::max(na, nb) / 2;
  if (na <= m || nb <= m) {
    // Unbalanced: split the longer operand.
    if (na > nb) {
      kara_rec(a, m, b, nb, out, p);
      kara_rec(a + m, na - m, b, nb, out + m, p);
    } else {
      kara_rec(a, na, b, m, out, p);
      kara_rec(a, na, b + m, nb - m, out + m, p);
    }
    return;
  }
  const std::size_t na1 = na - m, nb1 = nb - m;
  // z0 = a0*b0, z2 = a1*b1, z1 = (a0+a1)(b0+b1) - z0 - z2
  std::vector<std::uint64_t> z0(2 * m - 1, 0);
  kara_rec(a, m, b, m, z0.data(), p);
  std::vector<std::uint64_t> z2(na1 + nb1 - 1, 0);
  kara_rec(a + m, na1, b + m, nb1, z2.data(), p);

  std::vector<std::uint64_t> sa(std::max(m, na1), 0), sb(std::max(m, nb1), 0);
  for (std::size_t i = 0; i < m; ++i) sa[i] = a[i];
  for (std::size_t i = 0; i < na1; ++i) {
    std::uint64_t s = sa[i] + a[m + i];
    sa[i] = s >= p ? s - p : s;
  }
  for (std::size_t i = 0; i < m; ++i) sb[i] = b[i];
  for (std::size_t i = 0; i < nb1; ++i) {
    std::uint64_t s = sb[i] + b[m + i];
    sb[i] = s >= p ? s - p : s;
  }
  std::vector<std::uint64_t> z1(sa.size() + sb.size() - 1, 0);
  kara_rec(sa.data(), sa.size(), sb.data(), sb.size(), z1.data(), p);
  for (std::size_t k = 0; k < z0.size(); ++k) {
    std::uint64_t s = z1[k] + (p - z0[k]);
    z1[k] = s >= p ? s - p : s;
  }
  for (std::size_t k = 0; k < z2.size(); ++k) {
    std::uint64_t s = z1[k] + (p - z2[k]);
    z1[k] = s >= p ? s - p : s;
  }

  for (std::size_t k = 0; k < z0.size(); ++k) {
    std::uint64_t s = out[k] + z0[k];
    out[k] = s >= p ? s - p : s;
  }
  for (std::size_t k = 0; k < z1.size(); ++k) {
    std::uint64_t s = out[m + k] + z1[k];
    out[m + k] = s >= p ? s - p : s;
  }
  for (std::size_t k = 0; k < z2.size(); ++k) {
    std::uint64_t s = out[2 * m + k] + z2[k];
    out[2 * m + k] = s >= p ? s - p : s;
  }
}

// ---- GF(2) word-packed kernels ----------------------------------------

inline std::vector<std::uint64_t> gf2_pack(const std::vector<std::uint64_t>& bits) {
  std::vector<std::uint64_t> w((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) w[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return w;
}

inline std::vector<std::uint64_t> gf2_unpack(const std::vector<std::uint64_t>& w,
                                             std::size_t nbits) {
  std::vector<std::uint64_t> bits(nbits, 0);
  for (std::size_t i = 0; i < nbits; ++i) {
    bits[i] = (w[i >> 6] >> (i & 63)) & 1;
  }
  return bits;
}

// dst ^= src << shift (bit shift), dst must be large enough.
inline void gf2_xor_shifted(std::vector<std::uint64_t>& dst,
                            const std::vector<std::uint64_t>& src,
                            std::size_t shift) {
  const std::size_t ws = shift >> 6, bs = shift & 63;
  if (bs == 0) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[ws + i] ^= src[i];
  } else {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[ws + i] ^= (src[i] << bs) | carry;
      carry = src[i] >> (64 - bs);
    }
    if (carry) dst[ws + src.size()] ^= carry;
  }
}

// Carry-less multiplication via a 4-bit window over `a`.
inline std::vector<std::uint64_t> gf2_mul_words(
    const std::vector<std::uint64_t>& a, std::size_t abits,
    const std::vector<std::uint64_t>& b, std::size_t bbits) {
  std::vector<std::uint64_t> out((abits + 63) / 64 + (bbits + 63) / 64 + 2, 0);
  // tbl[v] = v(x) * b(x) for the 16 4-bit polynomials v.
  std::vector<std::uint64_t> tbl[16];
  const std::size_t tw = b.size() + 1;
  for (int v = 0; v < 16; ++v) tbl[v].assign(tw, 0);
  for (std::size_t i = 0; i < b.size(); ++i) tbl[1][i] = b[i];
  for (int v = 2; v < 16; ++v) {
    const int low = v & -v;  // lowest set bit
    const int rest = v ^ low;
    int sh = 0;
    while ((low >> sh) != 1) ++sh;
    for (std::size_t i = 0; i < tw; ++i) tbl[v][i] = tbl[rest][i];
    gf2_xor_shifted(tbl[v], tbl[1], static_cast<std::size_t>(sh));
  }
  for (std::size_t nib = 0; nib * 4 < abits; ++nib) {
    const std::size_t bitpos = nib * 4;
    const std::uint64_t word = a[bitpos >> 6];
    const unsigned v = (word >> (bitpos & 63)) & 0xF;
    if (v) gf2_xor_shifted(out, tbl[v], bitpos);
  }
  return out;
}

inline int gf2_top_bit(const std::vector<std::uint64_t>& w) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i]) return static_cast<int>(i * 64 + 63 - __builtin_clzll(w[i]));
  }
  return -1;
}

}  // namespace detail

// Generic schoolbook product (IntRing, and the reference path for tests).
template <class R>
DensePoly<R> poly_mul_schoolbook(const DensePoly<R>& a, const DensePoly<R>& b) {
  detail::require_same_ring(a, b);
  const R& ring = a.ring();
  if (a.is_zero() || b.is_zero()) return DensePoly<R>::zero(ring);
  std::vector<typename R::Value> out(a.coeffs().size() + b.coeffs().size() - 1,
                                     ring.zero());
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (ring.is_zero(a.coeffs()[i])) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      out[i + j] = ring.add(out[i + j], ring.mul(a.coeffs()[i], b.coeffs()[j]));
    }
  }
  return DensePoly<R>::from_coeffs(ring, std::move(out));
}

template <class R>
DensePoly<R> poly_mul(const DensePoly<R>& a, const DensePoly<R>& b) {
  return poly_mul_schoolbook(a, b);
}

// F_p product: GF(2) word arithmetic for p == 2, Karatsuba above the leaf
// threshold otherwise. Output is the same canonical element on all paths.
inline DensePoly<PrimeField> poly_mul(const DensePoly<PrimeField>& a,
                                      const DensePoly<PrimeField>& b) {
  detail::require_same_ring(a, b);
  const PrimeField& f = a.ring();
  if (a.is_zero() || b.is_zero()) return DensePoly<PrimeField>::zero(f);
  const std::size_t na = a.coeffs().size(), nb = b.coeffs().size();
  if (f.modulus() == 2) {
    auto aw = detail::gf2_pack(a.coeffs());
    auto bw = detail::gf2_pack(b.coeffs());
    auto ow = detail::gf2_mul_words(aw, na, bw, nb);
    return DensePoly<PrimeField>::from_coeffs(
        f, detail::gf2_unpack(ow, na + nb - 1));
  }
  std::vector<std::uint64_t> out(na + nb - 1, 0);
  if (na < detail::kKaratsubaThreshold || nb < detail::kKaratsubaThreshold) {
    detail::mul_acc_schoolbook(a.coeffs().data(), na, b.coeffs().data(), nb,
                               out.data(), f.modulus());
  } else {
    detail::kara_rec(a.coeffs().data(), na, b.coeffs().data(), nb, out.data(),
                     f.modulus());
  }
  return DensePoly<PrimeField>::from_coeffs(f, std::move(out));
}

// Division with remainder by a monic divisor. Non-monic divisors are
// rejected; nothing in the pipeline needs them.
template <class R>
std::pair<DensePoly<R>, DensePoly<R>> poly_divrem(const DensePoly<R>& a,
                                                  const DensePoly<R>& q) {
  detail::require_same_ring(a, q);
  const R& ring = a.ring();
  if (q.is_zero()) throw std::invalid_argument("poly_divrem: division by zero");
  if (!q.is_monic()) {
    throw std::invalid_argument("poly_divrem: divisor must be monic");
  }
  const std::size_t dq = q.degree();
  if (a.is_zero() || a.degree() < dq) {
    return {DensePoly<R>::zero(ring), a};
  }
  std::vector<typename R::Value> rem(a.coeffs());
  std::vector<typename R::Value> quot(a.degree() - dq + 1, ring.zero());
  for (std::size_t i = quot.size(); i-- > 0;) {
    const typename R::Value c = rem[i + dq];
    if (ring.is_zero(c)) continue;
    quot[i] = c;
    for (std::size_t j = 0; j < dq; ++j) {
      rem[i + j] = ring.sub(rem[i + j], ring.mul(c, q.coeffs()[j]));
    }
    rem[i + dq] = ring.zero();
  }
  rem.resize(dq);
  return {DensePoly<R>::from_coeffs(ring, std::move(quot)),
          DensePoly<R>::from_coeffs(ring, std::move(rem))};
}

inline std::pair<DensePoly<PrimeField>, DensePoly<PrimeField>> poly_divrem(
    const DensePoly<PrimeField>& a, const DensePoly<PrimeField>& q) {
  detail::require_same_ring(a, q);
  const PrimeField& f = a.ring();
  if (q.is_zero()) throw std::invalid_argument("poly_divrem: division by zero");
  if (!q.is_monic()) {
    throw std::invalid_argument("poly_divrem: divisor must be monic");
  }
  const std::size_t dq = q.degree();
  if (a.is_zero() || a.degree() < dq) {
    return {DensePoly<PrimeField>::zero(f), a};
  }
  const std::uint64_t p = f.modulus();
  if (p == 2) {
    auto rw = detail::gf2_pack(a.coeffs());
    rw.push_back(0);
    auto qw = detail::gf2_pack(q.coeffs());
    const std::size_t nq = a.degree() - dq + 1;
    std::vector<std::uint64_t> quot_w((nq + 63) / 64 + 1, 0);
    for (int bit = static_cast<int>(a.degree()); bit >= static_cast<int>(dq);
         --bit) {
      if ((rw[bit >> 6] >> (bit & 63)) & 1) {
        const std::size_t sh = static_cast<std::size_t>(bit) - dq;
        quot_w[sh >> 6] |= std::uint64_t{1} << (sh & 63);
        detail::gf2_xor_shifted(rw, qw, sh);
      }
    }
    return {DensePoly<PrimeField>::from_coeffs(f, detail::gf2_unpack(quot_w, nq)),
            DensePoly<PrimeField>::from_coeffs(f, detail::gf2_unpack(rw, dq))};
  }
  // Lazy cells: each subtraction adds c*(p - q[j]) < p^2; reduce a cell when
  // it is read, and everything at the end. Cells can take at most quot-many
  // additions, so guard against overflow by the chunked schedule.
  std::vector<std::uint64_t> rem(a.coeffs());
  std::vector<std::uint64_t> quot(a.degree() - dq + 1, 0);
  const std::size_t chunk = detail::lazy_chunk(p);
  std::size_t pending = 0;
  for (std::size_t i = quot.size(); i-- > 0;) {
    const std::uint64_t c = rem[i + dq] % p;
    if (c != 0) {
      quot[i] = c;
      const std::uint64_t* qc = q.coeffs().data();
      std::uint64_t* row = rem.data() + i;
      for (std::size_t j = 0; j < dq; ++j) row[j] += c * (p - qc[j]);
    }
    rem[i + dq] = 0;
    if (++pending == chunk) {
      for (std::size_t k = 0; k < i + dq; ++k) rem[k] %= p;
      pending = 0;
    }
  }
  rem.resize(dq);
  for (auto& c : rem) c %= p;
  return {DensePoly<PrimeField>::from_coeffs(f, std::move(quot)),
          DensePoly<PrimeField>::from_coeffs(f, std::move(rem))};
}

}  // namespace pskew
