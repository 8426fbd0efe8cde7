#pragma once

// Small finite fields F_p and F_{p^2} for reductions of O_d.
//
// The residue field of a degree-one prime (split or ramified pi over p) is
// F_p and the reduction map sends w to the root t of its minimal polynomial
// with pi | (w - t). An inert p has residue field F_{p^2} = F_p(wbar) where
// wbar satisfies the minimal polynomial of w mod p; we keep that basis, so
// reducing a + b*w is literally (a mod p) + (b mod p)*wbar and the Galois
// conjugation on O_d turns into Frobenius, which on u + v*wbar is just
// (u + v*s) - v*wbar since the two roots sum to s.
//
// Moduli are capped below 2^31 so products fit comfortably in unsigned
// 64-bit arithmetic; every level and table in this project is far below
// that.

#include <cstdint>
#include <vector>

#include "bianchi/ring.hpp"

namespace bianchi {

struct FqCtx {
  uint64_t p = 0;
  int e = 1;           // field is F_{p^e}, e in {1, 2}
  uint64_t s = 0, t = 0;  // for e = 2: wbar^2 = s*wbar + t

  uint64_t q_minus_2_hi() const { return 0; }  // placeholder, unused
};

struct Fq {
  uint64_t u = 0, v = 0;  // u + v*wbar; v = 0 in the prime field
  friend bool operator==(const Fq& a, const Fq& b) {
    return a.u == b.u && a.v == b.v;
  }
  friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }
};

inline bool fq_is_zero(const Fq& a) { return a.u == 0 && a.v == 0; }

inline Fq fq_add(const FqCtx& F, const Fq& a, const Fq& b) {
  Fq r{a.u + b.u, a.v + b.v};
  if (r.u >= F.p) r.u -= F.p;
  if (r.v >= F.p) r.v -= F.p;
  return r;
}
inline Fq fq_neg(const FqCtx& F, const Fq& a) {
  return Fq{a.u ? F.p - a.u : 0, a.v ? F.p - a.v : 0};
}
inline Fq fq_sub(const FqCtx& F, const Fq& a, const Fq& b) {
  return fq_add(F, a, fq_neg(F, b));
}
inline Fq fq_mul(const FqCtx& F, const Fq& a, const Fq& b) {
  const uint64_t p = F.p;
  if (F.e == 1) return Fq{a.u * b.u % p, 0};
  // (au + av x)(bu + bv x) with x^2 = s x + t
  uint64_t uu = a.u * b.u % p;
  uint64_t vv = a.v * b.v % p;
  uint64_t cross = (a.u * b.v + a.v * b.u) % p;
  return Fq{(uu + vv * F.t) % p, (cross + vv * F.s) % p};
}
inline Fq fq_one() { return Fq{1, 0}; }

inline Fq fq_pow(const FqCtx& F, Fq b, mpz_class e) {
  Fq r = fq_one();
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = fq_mul(F, r, b);
    b = fq_mul(F, b, b);
    e >>= 1;
  }
  return r;
}

inline Fq fq_inv(const FqCtx& F, const Fq& a) {
  BIANCHI_CHECK(!fq_is_zero(a), "fq_inv: zero");
  mpz_class q = mpz_class(static_cast<unsigned long>(F.p));
  if (F.e == 2) q = q * static_cast<unsigned long>(F.p);
  return fq_pow(F, a, q - 2);
}

// Frobenius x -> x^p; identity on the prime field.
inline Fq fq_frob(const FqCtx& F, const Fq& a) {
  if (F.e == 1) return a;
  uint64_t nu = (a.u + a.v * F.s) % F.p;
  return Fq{nu, a.v ? F.p - a.v : 0};
}

// ---------------------------------------------------------------------------
// Reduction maps O_d -> F_q.

struct ResidueMap {
  int d = 1;
  FqCtx F;
  // e = 1: w maps to t_root mod p. e = 2: w maps to wbar.
  uint64_t t_root = 0;

  Fq operator()(const QuadInt& x) const {
    mpz_class pa = x.a % static_cast<unsigned long>(F.p);
    if (pa < 0) pa += static_cast<unsigned long>(F.p);
    mpz_class pb = x.b % static_cast<unsigned long>(F.p);
    if (pb < 0) pb += static_cast<unsigned long>(F.p);
    uint64_t ra = pa.get_ui(), rb = pb.get_ui();
    if (F.e == 1) return Fq{(ra + rb * t_root) % F.p, 0};
    return Fq{ra, rb};
  }
};

// Degree-one reduction at a root t of the minimal polynomial of w mod p.
inline ResidueMap residue_map_root(int d, const mpz_class& p,
                                   const mpz_class& t) {
  BIANCHI_CHECK(p < (mpz_class(1) << 31), "residue map: p too large");
  ResidueMap m;
  m.d = d;
  m.F.p = mpz_get_ui(p.get_mpz_t());
  m.F.e = 1;
  mpz_class tt = t % p;
  if (tt < 0) tt += p;
  m.t_root = mpz_get_ui(tt.get_mpz_t());
  return m;
}

// Reduction mod an inert rational prime; residue field F_{p^2}.
inline ResidueMap residue_map_inert(int d, const mpz_class& p) {
  BIANCHI_CHECK(p < (mpz_class(1) << 31), "residue map: p too large");
  ResidueMap m;
  m.d = d;
  m.F.p = mpz_get_ui(p.get_mpz_t());
  m.F.e = 2;
  // minimal polynomial of w: x^2 + d resp. x^2 - x + (d+1)/4
  if (half_basis(d)) {
    m.F.s = 1;
    m.F.t = (m.F.p - static_cast<uint64_t>(half_q(d)) % m.F.p) % m.F.p;
  } else {
    m.F.s = 0;
    m.F.t = (m.F.p - static_cast<uint64_t>(d) % m.F.p) % m.F.p;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Dense matrices over F_q, just enough for rank counts.

struct MatFq {
  long nrows = 0, ncols = 0;
  std::vector<Fq> data;
  MatFq() = default;
  MatFq(long r, long c) : nrows(r), ncols(c), data(static_cast<size_t>(r) * c) {}
  Fq& at(long i, long j) { return data[static_cast<size_t>(i) * ncols + j]; }
  const Fq& at(long i, long j) const {
    return data[static_cast<size_t>(i) * ncols + j];
  }
};

inline MatFq matfq_mul(const FqCtx& F, const MatFq& a, const MatFq& b) {
  BIANCHI_CHECK(a.ncols == b.nrows, "matfq_mul: shape");
  MatFq out(a.nrows, b.ncols);
  for (long i = 0; i < a.nrows; ++i)
    for (long k = 0; k < a.ncols; ++k) {
      const Fq& v = a.at(i, k);
      if (fq_is_zero(v)) continue;
      for (long j = 0; j < b.ncols; ++j)
        out.at(i, j) = fq_add(F, out.at(i, j), fq_mul(F, v, b.at(k, j)));
    }
  return out;
}

// Gaussian elimination; destroys its argument.
inline long matfq_rank(const FqCtx& F, MatFq m) {
  long rank = 0;
  for (long j = 0; j < m.ncols && rank < m.nrows; ++j) {
    long piv = -1;
    for (long i = rank; i < m.nrows; ++i)
      if (!fq_is_zero(m.at(i, j))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (long c = 0; c < m.ncols; ++c) std::swap(m.at(rank, c), m.at(piv, c));
    Fq inv = fq_inv(F, m.at(rank, j));
    for (long i = rank + 1; i < m.nrows; ++i) {
      if (fq_is_zero(m.at(i, j))) continue;
      Fq f = fq_mul(F, m.at(i, j), inv);
      for (long c = j; c < m.ncols; ++c)
        m.at(i, c) = fq_sub(F, m.at(i, c), fq_mul(F, f, m.at(rank, c)));
    }
    ++rank;
  }
  return rank;
}

}  // namespace bianchi
