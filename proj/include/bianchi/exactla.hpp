#pragma once

// Exact linear algebra over the two Euclidean rings this project needs:
// Z (as mpz_class) and O_d (as QuadInt). Everything is written against a
// small ring_traits shim so the same Smith/kernel/quotient code serves both.
//
// Conventions, fixed once and used everywhere downstream:
//   * vectors are ROW vectors, maps act on the right: x -> x*A
//   * kernel_basis(A) returns rows spanning { x : x*A = 0 }
//   * SNF transforms satisfy U*A*V = diag(divisors), U and V unimodular
//
// The dense Smith form picks the nonzero entry of least norm as pivot at
// every step. On the structured matrices we feed it (Fox Jacobians, boundary
// maps, dense cores left over from sparse elimination) that heuristic keeps
// entry growth tame. It is quadratic-ish in scan cost but the dense blocks
// are small by the time they get here; the large sparse abelianization
// matrices never touch this path until a unit-pivot elimination has chewed
// them down (see sparse_snf below).
//
// kernel_basis works by left-transform row echelon: maintain U with
// U*A_orig = A_cur; when A_cur has its pivot rows used up, the U-rows sitting
// over zero rows of A_cur are a basis of the left kernel. Because U stays
// unimodular the produced basis spans the full kernel lattice, i.e. it is
// automatically saturated: that is exactly what quotient_decomposition needs
// to turn "cocycles mod coboundaries" into invariant factors without any
// rational clearing step.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bianchi/ring.hpp"

namespace bianchi {

// ---------------------------------------------------------------------------
// Ring traits.

template <class E>
struct ring_traits;

template <>
struct ring_traits<mpz_class> {
  static mpz_class zero_like(const mpz_class&) { return mpz_class(0); }
  static mpz_class one_like(const mpz_class&) { return mpz_class(1); }
  static bool is_zero(const mpz_class& x) { return sgn(x) == 0; }
  static bool is_unit(const mpz_class& x) { return x == 1 || x == -1; }
  static mpz_class norm(const mpz_class& x) { return abs(x); }
  // Balanced division: x = q*y + r with |r| <= |y|/2, the tie r = |y|/2
  // resolved to the positive remainder. Deterministic, norm-reducing.
  static void divmod(const mpz_class& x, const mpz_class& y, mpz_class& q,
                     mpz_class& r) {
    mpz_class ay = abs(y);
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), ay.get_mpz_t());
    if (2 * r > ay) {
      r -= ay;
      q += 1;
    }
    if (sgn(y) < 0) q = -q;
  }
  static mpz_class exact_div(const mpz_class& x, const mpz_class& y) {
    mpz_class q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    BIANCHI_CONTRACT(r == 0, "exact_div(Z): not divisible");
    return q;
  }
  // unit u with u*x canonical (here: nonnegative)
  static mpz_class canonical_unit(const mpz_class& x) {
    return sgn(x) < 0 ? mpz_class(-1) : mpz_class(1);
  }
  static mpz_class reduce(const mpz_class& x, const mpz_class& y) {
    mpz_class q, r;
    divmod(x, y, q, r);
    return r;
  }
  static mpz_class gcd(const mpz_class& x, const mpz_class& y) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return g;
  }
  static bool divides(const mpz_class& y, const mpz_class& x) {
    if (sgn(y) == 0) return sgn(x) == 0;
    return mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t()) != 0;
  }
  static std::string str(const mpz_class& x) { return x.get_str(); }
};

template <>
struct ring_traits<QuadInt> {
  static QuadInt zero_like(const QuadInt& s) { return QuadInt(0, 0, s.d); }
  static QuadInt one_like(const QuadInt& s) { return QuadInt(1, 0, s.d); }
  static bool is_zero(const QuadInt& x) { return x.is_zero(); }
  static bool is_unit(const QuadInt& x) { return ::bianchi::is_unit(x); }
  static mpz_class norm(const QuadInt& x) { return ::bianchi::norm(x); }
  static void divmod(const QuadInt& x, const QuadInt& y, QuadInt& q,
                     QuadInt& r) {
    DivResult dr = euclid_div(x, y);
    q = std::move(dr.q);
    r = std::move(dr.r);
  }
  static QuadInt exact_div(const QuadInt& x, const QuadInt& y) {
    return ::bianchi::exact_div(x, y);
  }
  static QuadInt canonical_unit(const QuadInt& x) {
    return canonical_associate(x).unit;
  }
  static QuadInt reduce(const QuadInt& x, const QuadInt& y) {
    return reduce_mod(x, y);
  }
  static QuadInt gcd(const QuadInt& x, const QuadInt& y) {
    return quad_gcd(x, y);
  }
  static bool divides(const QuadInt& y, const QuadInt& x) {
    return ::bianchi::divides(y, x);
  }
  static std::string str(const QuadInt& x) { return to_string(x); }
};

// ---------------------------------------------------------------------------
// Dense row-major matrix. Carries a prototype zero so QuadInt matrices know
// their ring without a global.

template <class E>
struct Mat {
  long nrows = 0, ncols = 0;
  E proto{};
  std::vector<E> data;

  Mat() = default;
  Mat(long r, long c, E zero)
      : nrows(r), ncols(c), proto(std::move(zero)),
        data(static_cast<size_t>(r) * c, proto) {}

  E& at(long i, long j) { return data[static_cast<size_t>(i) * ncols + j]; }
  const E& at(long i, long j) const {
    return data[static_cast<size_t>(i) * ncols + j];
  }

  static Mat identity(long n, const E& zero) {
    Mat m(n, n, zero);
    E one = ring_traits<E>::one_like(zero);
    for (long i = 0; i < n; ++i) m.at(i, i) = one;
    return m;
  }

  Mat row(long i) const {
    Mat r(1, ncols, proto);
    for (long j = 0; j < ncols; ++j) r.at(0, j) = at(i, j);
    return r;
  }

  void swap_rows(long i, long j) {
    if (i == j) return;
    for (long c = 0; c < ncols; ++c) std::swap(at(i, c), at(j, c));
  }
  void swap_cols(long i, long j) {
    if (i == j) return;
    for (long r = 0; r < nrows; ++r) std::swap(at(r, i), at(r, j));
  }
  // row_i -= q * row_k
  void row_axpy(long i, long k, const E& q) {
    for (long c = 0; c < ncols; ++c) at(i, c) = at(i, c) - q * at(k, c);
  }
  void col_axpy(long j, long k, const E& q) {
    for (long r = 0; r < nrows; ++r) at(r, j) = at(r, j) - q * at(r, k);
  }
  void scale_row(long i, const E& u) {
    for (long c = 0; c < ncols; ++c) at(i, c) = u * at(i, c);
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.nrows == y.nrows && x.ncols == y.ncols && x.data == y.data;
  }

  bool is_zero() const {
    for (const E& e : data)
      if (!ring_traits<E>::is_zero(e)) return false;
    return true;
  }
};

template <class E>
Mat<E> operator*(const Mat<E>& x, const Mat<E>& y) {
  BIANCHI_CHECK(x.ncols == y.nrows, "Mat multiply: shape mismatch");
  Mat<E> out(x.nrows, y.ncols, x.proto);
  for (long i = 0; i < x.nrows; ++i) {
    for (long k = 0; k < x.ncols; ++k) {
      const E& v = x.at(i, k);
      if (ring_traits<E>::is_zero(v)) continue;
      for (long j = 0; j < y.ncols; ++j) {
        if (ring_traits<E>::is_zero(y.at(k, j))) continue;
        out.at(i, j) = out.at(i, j) + v * y.at(k, j);
      }
    }
  }
  return out;
}

template <class E>
Mat<E> operator+(const Mat<E>& x, const Mat<E>& y) {
  BIANCHI_CHECK(x.nrows == y.nrows && x.ncols == y.ncols, "Mat add: shape");
  Mat<E> out = x;
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = out.data[i] + y.data[i];
  return out;
}

template <class E>
Mat<E> operator-(const Mat<E>& x, const Mat<E>& y) {
  BIANCHI_CHECK(x.nrows == y.nrows && x.ncols == y.ncols, "Mat sub: shape");
  Mat<E> out = x;
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = out.data[i] - y.data[i];
  return out;
}

// Vertical stack [top; bottom].
template <class E>
Mat<E> vstack(const Mat<E>& top, const Mat<E>& bottom) {
  BIANCHI_CHECK(top.ncols == bottom.ncols, "vstack: column mismatch");
  Mat<E> out(top.nrows + bottom.nrows, top.ncols, top.proto);
  std::copy(top.data.begin(), top.data.end(), out.data.begin());
  std::copy(bottom.data.begin(), bottom.data.end(),
            out.data.begin() + top.data.size());
  return out;
}

// Horizontal concatenation [left | right].
template <class E>
Mat<E> hstack(const Mat<E>& left, const Mat<E>& right) {
  BIANCHI_CHECK(left.nrows == right.nrows, "hstack: row mismatch");
  Mat<E> out(left.nrows, left.ncols + right.ncols, left.proto);
  for (long i = 0; i < left.nrows; ++i) {
    for (long j = 0; j < left.ncols; ++j) out.at(i, j) = left.at(i, j);
    for (long j = 0; j < right.ncols; ++j)
      out.at(i, left.ncols + j) = right.at(i, j);
  }
  return out;
}

template <class E>
Mat<E> kronecker(const Mat<E>& x, const Mat<E>& y) {
  Mat<E> out(x.nrows * y.nrows, x.ncols * y.ncols, x.proto);
  for (long i = 0; i < x.nrows; ++i)
    for (long j = 0; j < x.ncols; ++j) {
      if (ring_traits<E>::is_zero(x.at(i, j))) continue;
      for (long k = 0; k < y.nrows; ++k)
        for (long l = 0; l < y.ncols; ++l)
          out.at(i * y.nrows + k, j * y.ncols + l) = x.at(i, j) * y.at(k, l);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Smith normal form.

template <class E>
struct SnfResult {
  std::vector<E> divisors;  // the nonzero invariant factors, canonical, chain
  long rank = 0;
  bool have_U = false, have_V = false;
  Mat<E> U, V;  // U * A * V = diag(divisors) (padded with zeros)
};

namespace detail {

// Find the nonzero entry of minimal norm in A[t.., t..]; returns false if
// that block is zero.
template <class E>
bool min_norm_pivot(const Mat<E>& A, long t, long& pi, long& pj) {
  bool have = false;
  mpz_class best;
  for (long i = t; i < A.nrows; ++i)
    for (long j = t; j < A.ncols; ++j) {
      const E& v = A.at(i, j);
      if (ring_traits<E>::is_zero(v)) continue;
      mpz_class n = ring_traits<E>::norm(v);
      if (!have || n < best) {
        best = n;
        pi = i;
        pj = j;
        have = true;
        if (best == 1) return true;  // cannot do better
      }
    }
  return have;
}

}  // namespace detail

template <class E>
SnfResult<E> snf(Mat<E> A, bool need_U = false, bool need_V = false) {
  using T = ring_traits<E>;
  SnfResult<E> out;
  out.have_U = need_U;
  out.have_V = need_V;
  if (need_U) out.U = Mat<E>::identity(A.nrows, A.proto);
  if (need_V) out.V = Mat<E>::identity(A.ncols, A.proto);

  long t = 0;
  const long tmax = std::min(A.nrows, A.ncols);
  while (t < tmax) {
    long pi, pj;
    if (!detail::min_norm_pivot(A, t, pi, pj)) break;
    A.swap_rows(t, pi);
    if (need_U) out.U.swap_rows(t, pi);
    A.swap_cols(t, pj);
    if (need_V) out.V.swap_cols(t, pj);

    for (;;) {
      // Clear column t below the pivot. A nonzero remainder becomes the new
      // (strictly smaller) pivot, so this loop terminates.
      bool dirty = false;
      for (long i = t + 1; i < A.nrows; ++i) {
        if (T::is_zero(A.at(i, t))) continue;
        E q, r;
        T::divmod(A.at(i, t), A.at(t, t), q, r);
        A.row_axpy(i, t, q);
        if (need_U) out.U.row_axpy(i, t, q);
        if (!T::is_zero(A.at(i, t))) {
          A.swap_rows(t, i);
          if (need_U) out.U.swap_rows(t, i);
          dirty = true;
          break;
        }
      }
      if (dirty) continue;
      for (long j = t + 1; j < A.ncols; ++j) {
        if (T::is_zero(A.at(t, j))) continue;
        E q, r;
        T::divmod(A.at(t, j), A.at(t, t), q, r);
        A.col_axpy(j, t, q);
        if (need_V) out.V.col_axpy(j, t, q);
        if (!T::is_zero(A.at(t, j))) {
          A.swap_cols(t, j);
          if (need_V) out.V.swap_cols(t, j);
          dirty = true;
          break;
        }
      }
      if (dirty) continue;

      // Row and column are clear. Enforce that the pivot divides the whole
      // remaining block; a violation gets folded into row t and we go again.
      bool fixed = true;
      for (long i = t + 1; i < A.nrows && fixed; ++i)
        for (long j = t + 1; j < A.ncols; ++j) {
          E q, r;
          T::divmod(A.at(i, j), A.at(t, t), q, r);
          if (!T::is_zero(r)) {
            E minus_one = T::zero_like(A.proto) - T::one_like(A.proto);
            A.row_axpy(t, i, minus_one);  // row_t += row_i
            if (need_U) out.U.row_axpy(t, i, minus_one);
            fixed = false;
            break;
          }
        }
      if (fixed) break;
    }

    E u = T::canonical_unit(A.at(t, t));
    if (!(u == T::one_like(A.proto))) {
      A.scale_row(t, u);
      if (need_U) out.U.scale_row(t, u);
    }
    out.divisors.push_back(A.at(t, t));
    ++t;
  }
  out.rank = t;
  return out;
}

// ---------------------------------------------------------------------------
// Left kernel.

template <class E>
Mat<E> kernel_basis(const Mat<E>& A_in) {
  using T = ring_traits<E>;
  Mat<E> A = A_in;
  Mat<E> U = Mat<E>::identity(A.nrows, A.proto);
  std::vector<char> used(static_cast<size_t>(A.nrows), 0);

  for (long j = 0; j < A.ncols; ++j) {
    // Euclidean cascade on column j over the not-yet-pivoting rows.
    for (;;) {
      long piv = -1;
      mpz_class piv_norm;
      for (long i = 0; i < A.nrows; ++i) {
        if (used[i] || T::is_zero(A.at(i, j))) continue;
        mpz_class n = T::norm(A.at(i, j));
        if (piv < 0 || n < piv_norm) {
          piv = i;
          piv_norm = n;
        }
      }
      if (piv < 0) break;  // column clear
      bool any_left = false;
      for (long i = 0; i < A.nrows; ++i) {
        if (i == piv || used[i] || T::is_zero(A.at(i, j))) continue;
        E q, r;
        T::divmod(A.at(i, j), A.at(piv, j), q, r);
        A.row_axpy(i, piv, q);
        U.row_axpy(i, piv, q);
        if (!T::is_zero(A.at(i, j))) any_left = true;
      }
      if (!any_left) {
        used[piv] = 1;
        break;
      }
      // Some remainder survived; loop picks the new smaller pivot.
    }
  }

  long nkern = 0;
  for (long i = 0; i < A.nrows; ++i)
    if (!used[i]) ++nkern;
  Mat<E> K(nkern, A.nrows, A.proto);
  long r = 0;
  for (long i = 0; i < A.nrows; ++i) {
    if (used[i]) continue;
    for (long j = 0; j < A.ncols; ++j)
      BIANCHI_CONTRACT(T::is_zero(A.at(i, j)),
                       "kernel_basis: unused row is not zero");
    for (long c = 0; c < A.nrows; ++c) K.at(r, c) = U.at(i, c);
    ++r;
  }
  return K;
}

// Exact rank by fraction-free (Bareiss) elimination. Every intermediate
// entry is a minor of the input matrix, so growth obeys the Hadamard bound
// instead of the exponential blowup transform-tracking elimination can hit;
// that is what makes the rank of the wide Fox relator matrices affordable
// where a full kernel basis is not. Destroys its copy of the input. The
// two-argument form also reports the final pivot, which by the Bareiss
// invariant is a nonzero rank-sized minor of the input (a unit for rank 0).
template <class E>
long rank_bareiss(Mat<E> a, E* last_pivot) {
  using T = ring_traits<E>;
  long rank = 0;
  E prev = T::one_like(a.proto);
  for (long col = 0; col < a.ncols && rank < a.nrows; ++col) {
    long piv = -1;
    mpz_class piv_norm;
    for (long i = rank; i < a.nrows; ++i) {
      if (T::is_zero(a.at(i, col))) continue;
      mpz_class n = T::norm(a.at(i, col));
      if (piv < 0 || n < piv_norm) {
        piv = i;
        piv_norm = n;
      }
    }
    if (piv < 0) continue;
    if (piv != rank) a.swap_rows(piv, rank);
    const E pivot = a.at(rank, col);
    for (long i = rank + 1; i < a.nrows; ++i) {
      const E head = a.at(i, col);
      for (long j = col + 1; j < a.ncols; ++j)
        a.at(i, j) = T::exact_div(pivot * a.at(i, j) - head * a.at(rank, j), prev);
      a.at(i, col) = T::zero_like(a.proto);
    }
    prev = pivot;
    ++rank;
  }
  if (last_pivot) *last_pivot = prev;
  return rank;
}

template <class E>
long rank_bareiss(Mat<E> a) {
  return rank_bareiss(std::move(a), static_cast<E*>(nullptr));
}

// Invariant factors of A when only the divisor chain and rank are wanted (no
// transforms), kept affordable on large inputs by bounding every entry.
//
// Bareiss gives the rank r and a nonzero r x r minor D. Every invariant
// factor of A divides D, so the cokernel's torsion is the torsion of the
// full-rank lattice rowspan(A) + D*O^m, whose invariant chain is that of A
// followed by m - r copies of D. That lattice contains D*O^m, which licenses
// the classical Smith reduction modulo D (Cohen 2.4.8, Hafner-McCurley):
// run the usual pivot-clear-fold elimination but reduce every filled entry
// mod D as it is written, and read each final divisor as gcd(pivot, D); a
// block that becomes zero mod D stands for divisors equal to D itself. The
// result is exact, and no intermediate entry ever outgrows D.
template <class E>
SnfResult<E> snf_cokernel(const Mat<E>& A_in) {
  using T = ring_traits<E>;
  SnfResult<E> out;
  E D = T::one_like(A_in.proto);
  out.rank = rank_bareiss(A_in, &D);
  const long m = A_in.ncols;
  if (out.rank == 0) {
    for (long i = 0; i < A_in.nrows; ++i)
      for (long j = 0; j < m; ++j)
        BIANCHI_CONTRACT(T::is_zero(A_in.at(i, j)), "snf_cokernel: rank 0 but nonzero entry");
    return out;
  }

  Mat<E> A = A_in;
  for (long i = 0; i < A.nrows; ++i)
    for (long j = 0; j < m; ++j) A.at(i, j) = T::reduce(A.at(i, j), D);

  std::vector<E> chain;
  long t = 0;
  const long tmax = std::min(A.nrows, m);
  while (t < tmax) {
    long pi, pj;
    if (!detail::min_norm_pivot(A, t, pi, pj)) break;
    A.swap_rows(t, pi);
    A.swap_cols(t, pj);

    for (;;) {
      bool dirty = false;
      for (long i = t + 1; i < A.nrows; ++i) {
        if (T::is_zero(A.at(i, t))) continue;
        E q, r;
        T::divmod(A.at(i, t), A.at(t, t), q, r);
        A.row_axpy(i, t, q);
        for (long j = t + 1; j < A.ncols; ++j) A.at(i, j) = T::reduce(A.at(i, j), D);
        if (!T::is_zero(A.at(i, t))) {
          A.swap_rows(t, i);
          dirty = true;
          break;
        }
      }
      if (dirty) continue;
      for (long j = t + 1; j < A.ncols; ++j) {
        if (T::is_zero(A.at(t, j))) continue;
        E q, r;
        T::divmod(A.at(t, j), A.at(t, t), q, r);
        A.col_axpy(j, t, q);
        for (long i = t + 1; i < A.nrows; ++i) A.at(i, j) = T::reduce(A.at(i, j), D);
        if (!T::is_zero(A.at(t, j))) {
          A.swap_cols(t, j);
          dirty = true;
          break;
        }
      }
      if (dirty) continue;

      bool fixed = true;
      for (long i = t + 1; i < A.nrows && fixed; ++i)
        for (long j = t + 1; j < A.ncols; ++j) {
          E q, r;
          T::divmod(A.at(i, j), A.at(t, t), q, r);
          if (!T::is_zero(r)) {
            E minus_one = T::zero_like(A.proto) - T::one_like(A.proto);
            A.row_axpy(t, i, minus_one);
            fixed = false;
            break;
          }
        }
      if (fixed) break;
    }

    chain.push_back(T::gcd(A.at(t, t), D));
    ++t;
  }
  // A zero block mod D means the remaining divisors are D itself. Only the
  // first m - (m - rank) = rank entries belong to A; the trailing m - rank
  // positions are the padding copies of D and every one of them must be an
  // associate of D, which doubles as a consistency check on the rank.
  while (static_cast<long>(chain.size()) < m) chain.push_back(T::gcd(T::zero_like(A.proto), D));
  for (size_t i = 0; i + 1 < chain.size(); ++i)
    BIANCHI_CONTRACT(T::divides(chain[i], chain[i + 1]),
                     "snf_cokernel: divisor chain violated");
  for (long i = out.rank; i < m; ++i)
    BIANCHI_CONTRACT(T::divides(chain[static_cast<size_t>(i)], D) &&
                         T::divides(D, chain[static_cast<size_t>(i)]),
                     "snf_cokernel: padding divisor is not the modulus");
  chain.resize(static_cast<size_t>(out.rank));
  for (E& e : chain) {
    E u = T::canonical_unit(e);
    if (!(u == T::one_like(A.proto))) e = e * u;
  }
  out.divisors = std::move(chain);
  return out;
}

// ---------------------------------------------------------------------------
// Quotient of a saturated sublattice by a sub-submodule.

template <class E>
struct AbelianDecomposition {
  std::vector<E> divisors;  // non-unit invariant factors, canonical, chain
  long rank = 0;

  std::vector<mpz_class> divisor_norms() const {
    std::vector<mpz_class> out;
    out.reserve(divisors.size());
    for (const E& e : divisors) out.push_back(ring_traits<E>::norm(e));
    return out;
  }
};

// Exact solve of X * Z = B where Z has independent rows. Solves through the
// Smith form: with U Z V = [D | 0], X = (B V)_[:, :k] D^-1 U. Every step must
// divide exactly; if Z's row span is saturated and contains the rows of B the
// divisions are automatic, and any other input is caught loudly (dependent Z
// rows, B outside the span, or a non-integral solution all throw
// contract_error rather than returning junk).
template <class E>
Mat<E> solve_in_span(const Mat<E>& Z, const Mat<E>& B) {
  using T = ring_traits<E>;
  BIANCHI_CHECK(Z.ncols == B.ncols, "solve_in_span: shape mismatch");
  const long k = Z.nrows;
  if (k == 0) {
    BIANCHI_CONTRACT(B.nrows == 0 || B.is_zero(),
                     "solve_in_span: B nonzero but Z empty");
    return Mat<E>(B.nrows, 0, B.proto);
  }

  SnfResult<E> s = snf(Z, /*need_U=*/true, /*need_V=*/true);
  BIANCHI_CONTRACT(s.rank == k, "solve_in_span: Z rows dependent");

  Mat<E> W = B * s.V;
  for (long i = 0; i < W.nrows; ++i)
    for (long j = k; j < W.ncols; ++j)
      BIANCHI_CONTRACT(T::is_zero(W.at(i, j)),
                       "solve_in_span: B outside the span of Z");
  Mat<E> X(B.nrows, k, Z.proto);
  for (long i = 0; i < B.nrows; ++i)
    for (long j = 0; j < k; ++j)
      X.at(i, j) = T::exact_div(W.at(i, j), s.divisors[j]);
  X = X * s.U;

  BIANCHI_CONTRACT(X * Z == B, "solve_in_span: X*Z != B");
  return X;
}

// Z: rows form a basis of a saturated sublattice L of E^n (e.g. produced by
// kernel_basis). B: rows lie in L. Returns the invariant factors and free
// rank of L / <rows of B>. Exactness is enforced: if B is not contained in L
// or L's basis rows are dependent, this throws contract_error rather than
// silently returning junk.
template <class E>
AbelianDecomposition<E> quotient_decomposition(const Mat<E>& Z,
                                               const Mat<E>& B) {
  using T = ring_traits<E>;
  const long k = Z.nrows;
  AbelianDecomposition<E> out;
  if (k == 0) {
    BIANCHI_CHECK(Z.ncols == B.ncols, "quotient_decomposition: shape mismatch");
    BIANCHI_CONTRACT(B.nrows == 0 || B.is_zero(),
                     "quotient_decomposition: B nonzero but Z empty");
    out.rank = 0;
    return out;
  }

  SnfResult<E> sx = snf(solve_in_span(Z, B));
  for (const E& e : sx.divisors)
    if (!T::is_unit(e)) out.divisors.push_back(e);
  out.rank = k - sx.rank;
  return out;
}

// ---------------------------------------------------------------------------
// Sparse integer Smith form (for the big abelianization matrices).

struct overflow_escalate : std::exception {
  const char* what() const noexcept override {
    return "int64 overflow, escalating to arbitrary precision";
  }
};

struct SparseMatZ {
  long ncols = 0;
  // Each row: sorted (col, value) pairs, value != 0.
  std::vector<std::vector<std::pair<int, long long>>> rows;
};

struct SparseSnfOptions {
  // Hand the remainder to the dense path once the active block has at most
  // this many columns, even if unit pivots remain.
  long dense_threshold = 0;  // 0 = keep eliminating while unit pivots exist
};

struct SparseSnfResult {
  std::vector<mpz_class> divisors;  // non-unit invariant factors, positive
  long rank = 0;
  long unit_pivots = 0;      // how much the cheap phase achieved
  long dense_rows = 0, dense_cols = 0;  // size of the dense core
  bool escalated = false;    // int64 phase overflowed, mpz rerun used
};

SparseSnfResult sparse_snf(const SparseMatZ& A, const SparseSnfOptions& opt = {});

// Rank of A over F_p (p an odd prime below 2^31).
long sparse_rank_mod_p(const SparseMatZ& A, uint32_t p);

// Rank over Q, computed as the agreeing rank mod two fixed 30-bit primes,
// falling back to exact elimination when they disagree. The fixed primes keep
// the result reproducible run to run.
long sparse_rank_exactish(const SparseMatZ& A);

}  // namespace bianchi
