#pragma once

// Exact arithmetic in the five norm-Euclidean imaginary quadratic orders
// O_d = Z[w], d in {1, 2, 3, 7, 11}, where
//
//   w = sqrt(-d)        for d = 1, 2      (w^2 = -d)
//   w = (1+sqrt(-d))/2  for d = 3, 7, 11  (w^2 = w - (d+1)/4)
//
// Elements are stored on the integral basis (1, w) with GMP integers, so
// nothing here ever overflows or rounds. Division is genuinely Euclidean:
// we compute the exact rational quotient x*conj(y)/N(y) and test the four
// floor/ceil lattice corners around it, keeping the remainder of least
// norm. That search is what makes d = 11 work; nearest-integer rounding of
// both coordinates alone can land on a remainder of norm >= N(y) in the
// skew (1, w) basis, but one of the four corners is always strictly inside
// the unit-norm ellipse. Ties are broken lexicographically so every
// operation in this file is deterministic, which the caching layer and the
// regression suite rely on.
//
// Associates: the unit groups are {±1, ±i} (d=1), {±1} (d=2, 7, 11) and
// the sixth roots of unity (d=3). canonical_associate picks, among the
// unit multiples of x, the lexicographically least element satisfying
// a > 0, or a = 0 and b > 0. gcds and SNF divisors are always returned in
// that canonical form.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace bianchi {

// Thrown when a caller violates a documented precondition (wrong d, division
// by zero, non-invertible residue, ...). file:line is embedded by the macro.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown when an internal exactness contract fails (a computed identity that
// must hold exactly does not). Indicates a bug, never bad user input.
struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

#define BIANCHI_STR2(x) #x
#define BIANCHI_STR(x) BIANCHI_STR2(x)
#define BIANCHI_CHECK(cond, msg)                                            \
  do {                                                                      \
    if (!(cond))                                                            \
      throw ::bianchi::domain_error(__FILE__ ":" BIANCHI_STR(__LINE__) ": " \
                                    msg);                                   \
  } while (0)
#define BIANCHI_CONTRACT(cond, msg)                                          \
  do {                                                                       \
    if (!(cond))                                                             \
      throw ::bianchi::contract_error(__FILE__ ":" BIANCHI_STR(__LINE__) ": " \
                                      msg);                                  \
  } while (0)

inline bool valid_d(int d) {
  return d == 1 || d == 2 || d == 3 || d == 7 || d == 11;
}

// True when w = (1+sqrt(-d))/2, i.e. d = 3 mod 4 among our five.
inline bool half_basis(int d) { return d == 3 || d == 7 || d == 11; }

// w^2 = w - half_q(d) on the half-integer basis; unused for d = 1, 2.
inline long half_q(int d) { return (d + 1) / 4; }

// Field discriminant: -4d for d = 1, 2 and -d otherwise.
inline long discriminant(int d) { return half_basis(d) ? -d : -4 * d; }

struct QuadInt {
  mpz_class a, b;  // value = a + b*w
  int d = 1;

  QuadInt() = default;
  QuadInt(mpz_class a_, mpz_class b_, int d_)
      : a(std::move(a_)), b(std::move(b_)), d(d_) {
    BIANCHI_CHECK(valid_d(d), "QuadInt: d must be one of 1,2,3,7,11");
  }
  static QuadInt integer(long n, int d) { return QuadInt(n, 0, d); }

  bool is_zero() const { return a == 0 && b == 0; }
  bool is_one() const { return a == 1 && b == 0; }

  friend bool operator==(const QuadInt& x, const QuadInt& y) {
    return x.d == y.d && x.a == y.a && x.b == y.b;
  }
  friend bool operator!=(const QuadInt& x, const QuadInt& y) {
    return !(x == y);
  }
  // Lexicographic on (a, b); used only for deterministic tie-breaking.
  friend bool lex_less(const QuadInt& x, const QuadInt& y) {
    int c = cmp(x.a, y.a);
    if (c != 0) return c < 0;
    return cmp(x.b, y.b) < 0;
  }
};

inline void check_same_ring(const QuadInt& x, const QuadInt& y) {
  BIANCHI_CHECK(x.d == y.d, "mixed rings O_d in one operation");
}

inline QuadInt operator+(const QuadInt& x, const QuadInt& y) {
  check_same_ring(x, y);
  return QuadInt(x.a + y.a, x.b + y.b, x.d);
}
inline QuadInt operator-(const QuadInt& x, const QuadInt& y) {
  check_same_ring(x, y);
  return QuadInt(x.a - y.a, x.b - y.b, x.d);
}
inline QuadInt operator-(const QuadInt& x) { return QuadInt(-x.a, -x.b, x.d); }

inline QuadInt operator*(const QuadInt& x, const QuadInt& y) {
  check_same_ring(x, y);
  // (a1 + b1 w)(a2 + b2 w) with w^2 = -d resp. w^2 = w - q.
  mpz_class cross = x.a * y.b + x.b * y.a;
  mpz_class bb = x.b * y.b;
  if (half_basis(x.d)) {
    return QuadInt(x.a * y.a - half_q(x.d) * bb, cross + bb, x.d);
  }
  return QuadInt(x.a * y.a - x.d * bb, cross, x.d);
}
inline QuadInt& operator+=(QuadInt& x, const QuadInt& y) { return x = x + y; }
inline QuadInt& operator-=(QuadInt& x, const QuadInt& y) { return x = x - y; }
inline QuadInt& operator*=(QuadInt& x, const QuadInt& y) { return x = x * y; }

inline QuadInt conj(const QuadInt& x) {
  // a + b*w  ->  a - b*w  resp.  (a + b) - b*w  since conj(w) = 1 - w.
  if (half_basis(x.d)) return QuadInt(x.a + x.b, -x.b, x.d);
  return QuadInt(x.a, -x.b, x.d);
}

inline mpz_class norm(const QuadInt& x) {
  if (half_basis(x.d))
    return x.a * x.a + x.a * x.b + half_q(x.d) * x.b * x.b;
  return x.a * x.a + x.d * x.b * x.b;
}

inline mpz_class trace(const QuadInt& x) {
  return half_basis(x.d) ? mpz_class(2 * x.a + x.b) : mpz_class(2 * x.a);
}

inline bool is_unit(const QuadInt& x) { return norm(x) == 1; }

// All units of O_d, in a fixed order starting with 1.
std::vector<QuadInt> units(int d);

// Generator w itself, handy when building elements from scratch.
inline QuadInt omega(int d) { return QuadInt(0, 1, d); }

struct DivResult {
  QuadInt q, r;  // x = q*y + r with N(r) < N(y)
};

// Euclidean division by four-corner candidate search; see file header.
DivResult euclid_div(const QuadInt& x, const QuadInt& y);

// Canonical remainder of x mod m (the euclid_div remainder).
inline QuadInt reduce_mod(const QuadInt& x, const QuadInt& m) {
  return euclid_div(x, m).r;
}

inline bool divides(const QuadInt& y, const QuadInt& x) {
  if (y.is_zero()) return x.is_zero();
  return euclid_div(x, y).r.is_zero();
}

// Exact quotient; throws contract_error if y does not divide x.
QuadInt exact_div(const QuadInt& x, const QuadInt& y);

struct CanonicalResult {
  QuadInt value;  // canonical associate of x
  QuadInt unit;   // value = unit * x
};
CanonicalResult canonical_associate(const QuadInt& x);
inline QuadInt canonical(const QuadInt& x) {
  return canonical_associate(x).value;
}

// gcd in canonical-associate form; gcd(0, 0) = 0.
QuadInt quad_gcd(QuadInt x, QuadInt y);

struct ExtGcd {
  QuadInt g, u, v;  // g = u*x + v*y, g canonical
};
ExtGcd quad_ext_gcd(const QuadInt& x, const QuadInt& y);

// ---------------------------------------------------------------------------
// Splitting of rational primes.

enum class SplitKind { split, inert, ramified };

struct SplitInfo {
  SplitKind kind;
  // For split/ramified: canonical prime pi over p, and the root t of the
  // minimal polynomial of w mod p, i.e. pi | (w - t). Inert primes leave
  // these empty (pi = p itself generates the prime ideal).
  QuadInt pi;
  mpz_class t;
};

SplitInfo split_type(int d, const mpz_class& p);

const char* split_kind_name(SplitKind k);

// ---------------------------------------------------------------------------
// 2x2 matrices over O_d. Row-major; group elements act on row vectors from
// the right everywhere in this codebase, so products compose left to right.

struct Mat2 {
  QuadInt m00, m01, m10, m11;

  Mat2() = default;
  Mat2(QuadInt a, QuadInt b, QuadInt c, QuadInt dd)
      : m00(std::move(a)), m01(std::move(b)), m10(std::move(c)),
        m11(std::move(dd)) {}
  static Mat2 identity(int d) {
    return Mat2(QuadInt(1, 0, d), QuadInt(0, 0, d), QuadInt(0, 0, d),
                QuadInt(1, 0, d));
  }
  int ring_d() const { return m00.d; }
  QuadInt det() const { return m00 * m11 - m01 * m10; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2(x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
                x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11);
  }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.m00 == y.m00 && x.m01 == y.m01 && x.m10 == y.m10 &&
           x.m11 == y.m11;
  }
  friend bool operator!=(const Mat2& x, const Mat2& y) { return !(x == y); }

  Mat2 conjugated() const {  // entrywise Galois conjugate
    return Mat2(conj(m00), conj(m01), conj(m10), conj(m11));
  }
};

// Inverse of a matrix whose determinant is a unit (throws otherwise).
Mat2 mat2_inverse(const Mat2& m);

// True iff x = u*y for a unit u, i.e. x and y agree in PGL_2(O_d).
bool mat2_proportional(const Mat2& x, const Mat2& y);

// True iff m is a unit multiple of the identity.
bool mat2_is_scalar(const Mat2& m);

// ---------------------------------------------------------------------------
// String / JSON forms. QuadInt round-trips through "a+b*w" style strings and
// through two-element JSON arrays of decimal strings, both exact.

std::string to_string(const QuadInt& x);
std::ostream& operator<<(std::ostream& os, const QuadInt& x);

std::string quadint_to_json(const QuadInt& x);
QuadInt quadint_from_json(const std::string& json_text, int d);

}  // namespace bianchi
