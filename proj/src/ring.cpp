#include "bianchi/ring.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace bianchi {

std::vector<QuadInt> units(int d) {
  BIANCHI_CHECK(valid_d(d), "units: bad d");
  std::vector<QuadInt> u;
  u.push_back(QuadInt(1, 0, d));
  if (d == 1) {
    // powers of i = w
    u.push_back(QuadInt(0, 1, d));
    u.push_back(QuadInt(-1, 0, d));
    u.push_back(QuadInt(0, -1, d));
  } else if (d == 3) {
    // powers of the primitive sixth root w = (1+sqrt(-3))/2
    u.push_back(QuadInt(0, 1, d));    // w
    u.push_back(QuadInt(-1, 1, d));   // w^2 = w - 1
    u.push_back(QuadInt(-1, 0, d));   // w^3 = -1
    u.push_back(QuadInt(0, -1, d));   // w^4
    u.push_back(QuadInt(1, -1, d));   // w^5
  } else {
    u.push_back(QuadInt(-1, 0, d));
  }
  return u;
}

DivResult euclid_div(const QuadInt& x, const QuadInt& y) {
  check_same_ring(x, y);
  BIANCHI_CHECK(!y.is_zero(), "euclid_div: division by zero");
  const mpz_class n = norm(y);
  const QuadInt num = x * conj(y);  // exact quotient = num / n coordinatewise

  mpz_class fa, fb;
  mpz_fdiv_q(fa.get_mpz_t(), num.a.get_mpz_t(), n.get_mpz_t());
  mpz_fdiv_q(fb.get_mpz_t(), num.b.get_mpz_t(), n.get_mpz_t());

  bool have = false;
  DivResult best;
  mpz_class best_norm;
  for (int da = 0; da <= 1; ++da) {
    for (int db = 0; db <= 1; ++db) {
      QuadInt q(fa + da, fb + db, x.d);
      QuadInt r = x - q * y;
      mpz_class rn = norm(r);
      if (!have || rn < best_norm ||
          (rn == best_norm && lex_less(r, best.r))) {
        best = DivResult{std::move(q), std::move(r)};
        best_norm = std::move(rn);
        have = true;
      }
    }
  }
  BIANCHI_CONTRACT(best_norm < n, "euclid_div: no corner beat N(y)");
  return best;
}

QuadInt exact_div(const QuadInt& x, const QuadInt& y) {
  DivResult dr = euclid_div(x, y);
  BIANCHI_CONTRACT(dr.r.is_zero(), "exact_div: not divisible");
  return dr.q;
}

CanonicalResult canonical_associate(const QuadInt& x) {
  if (x.is_zero()) return {x, QuadInt(1, 0, x.d)};
  bool have = false;
  CanonicalResult best;
  for (const QuadInt& u : units(x.d)) {
    QuadInt cand = u * x;
    bool admissible = cand.a > 0 || (cand.a == 0 && cand.b > 0);
    if (!admissible) continue;
    if (!have || lex_less(cand, best.value)) {
      best = {cand, u};
      have = true;
    }
  }
  BIANCHI_CONTRACT(have, "canonical_associate: no admissible associate");
  return best;
}

QuadInt quad_gcd(QuadInt x, QuadInt y) {
  while (!y.is_zero()) {
    QuadInt r = euclid_div(x, y).r;
    x = std::move(y);
    y = std::move(r);
  }
  return canonical(x);
}

ExtGcd quad_ext_gcd(const QuadInt& x, const QuadInt& y) {
  const int d = x.d;
  QuadInt r0 = x, r1 = y;
  QuadInt u0(1, 0, d), v0(0, 0, d);
  QuadInt u1(0, 0, d), v1(1, 0, d);
  while (!r1.is_zero()) {
    DivResult dr = euclid_div(r0, r1);
    QuadInt r2 = dr.r;
    QuadInt u2 = u0 - dr.q * u1;
    QuadInt v2 = v0 - dr.q * v1;
    r0 = std::move(r1); r1 = std::move(r2);
    u0 = std::move(u1); u1 = std::move(u2);
    v0 = std::move(v1); v1 = std::move(v2);
  }
  CanonicalResult c = canonical_associate(r0);
  ExtGcd out{c.value, c.unit * u0, c.unit * v0};
  BIANCHI_CONTRACT(out.u * x + out.v * y == out.g, "ext_gcd: Bezout check");
  return out;
}

// --------------------------------------------------------------------------
// Square roots mod an odd prime (Tonelli-Shanks). Input must satisfy
// legendre(a, p) = 1; we only call it that way.
static mpz_class sqrt_mod_p(const mpz_class& a_in, const mpz_class& p) {
  mpz_class a = a_in % p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  if (mpz_tstbit(p.get_mpz_t(), 0) && p % 4 == 3) {
    mpz_class e = (p + 1) / 4, r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  }
  // p = 1 mod 4: full Tonelli-Shanks.
  mpz_class q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) { q /= 2; ++s; }
  mpz_class z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  mpz_class m = s, c, t, r, e;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  e = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  while (t != 1) {
    mpz_class tt = t;
    unsigned long i = 0;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
      BIANCHI_CONTRACT(i < m, "sqrt_mod_p: nonresidue slipped through");
    }
    mpz_class b = c;
    for (mpz_class j = 0; j < m - i - 1; ++j) b = b * b % p;
    m = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  BIANCHI_CONTRACT(r * r % p == a, "sqrt_mod_p: result check");
  return r;
}

SplitInfo split_type(int d, const mpz_class& p) {
  BIANCHI_CHECK(valid_d(d), "split_type: bad d");
  BIANCHI_CHECK(p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 40),
                "split_type: p must be prime");
  const mpz_class disc = discriminant(d);
  SplitInfo info;

  auto finish_with_root = [&](SplitKind kind, const mpz_class& t) {
    info.kind = kind;
    info.t = t % p;
    if (info.t < 0) info.t += p;
    QuadInt wmt = omega(d) - QuadInt(info.t, 0, d);
    info.pi = quad_gcd(QuadInt(p, 0, d), wmt);
    BIANCHI_CONTRACT(norm(info.pi) == p, "split_type: N(pi) != p");
    BIANCHI_CONTRACT(divides(info.pi, wmt), "split_type: pi does not divide w-t");
  };

  if (mpz_divisible_p(disc.get_mpz_t(), p.get_mpz_t())) {
    // Ramified. The double root of the minimal polynomial mod p.
    mpz_class t;
    if (!half_basis(d)) {
      t = (d == 1) ? 1 : 0;  // x^2+1 = (x+1)^2 mod 2; x^2+2 = x^2 mod 2
    } else {
      t = (mpz_class(d) + 1) / 2;  // 1/2 mod d, since x^2-x+q = (x-1/2)^2
    }
    finish_with_root(SplitKind::ramified, t);
    return info;
  }

  if (p == 2) {
    // Only reachable for d = 3, 7, 11 (2 | disc for d = 1, 2).
    // x^2 + x + q mod 2: splits iff q is even.
    if (half_q(d) % 2 == 0) {
      finish_with_root(SplitKind::split, 0);
    } else {
      info.kind = SplitKind::inert;
    }
    return info;
  }

  if (mpz_legendre(disc.get_mpz_t(), p.get_mpz_t()) == -1) {
    info.kind = SplitKind::inert;
    return info;
  }

  mpz_class md = mpz_class(-d) % p;
  if (md < 0) md += p;
  mpz_class s = sqrt_mod_p(md, p);
  mpz_class t;
  if (half_basis(d)) {
    // roots of x^2 - x + q are (1 +- s)/2 mod p
    mpz_class inv2;
    mpz_class two = 2;
    BIANCHI_CONTRACT(
        mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p.get_mpz_t()),
        "split_type: 2 not invertible");
    t = (1 + s) * inv2 % p;
  } else {
    t = s;
  }
  finish_with_root(SplitKind::split, t);
  return info;
}

const char* split_kind_name(SplitKind k) {
  switch (k) {
    case SplitKind::split: return "split";
    case SplitKind::inert: return "inert";
    case SplitKind::ramified: return "ramified";
  }
  return "?";
}

Mat2 mat2_inverse(const Mat2& m) {
  QuadInt det = m.det();
  BIANCHI_CHECK(is_unit(det), "mat2_inverse: determinant is not a unit");
  QuadInt dinv = conj(det);  // u * conj(u) = N(u) = 1 for units
  Mat2 inv(dinv * m.m11, dinv * (-m.m01), dinv * (-m.m10), dinv * m.m00);
  BIANCHI_CONTRACT(m * inv == Mat2::identity(m.ring_d()),
                   "mat2_inverse: M*inv != I");
  return inv;
}

bool mat2_proportional(const Mat2& x, const Mat2& y) {
  for (const QuadInt& u : units(x.ring_d())) {
    if (Mat2(u * y.m00, u * y.m01, u * y.m10, u * y.m11) == x) return true;
  }
  return false;
}

bool mat2_is_scalar(const Mat2& m) {
  return m.m01.is_zero() && m.m10.is_zero() && m.m00 == m.m11 &&
         is_unit(m.m00);
}

std::string to_string(const QuadInt& x) {
  std::ostringstream os;
  if (x.b == 0) {
    os << x.a;
  } else {
    if (x.a != 0) os << x.a << (x.b > 0 ? "+" : "");
    if (x.b == 1) os << "w";
    else if (x.b == -1) os << "-w";
    else os << x.b << "*w";
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadInt& x) {
  return os << to_string(x);
}

std::string quadint_to_json(const QuadInt& x) {
  nlohmann::json j = {x.a.get_str(), x.b.get_str()};
  return j.dump();
}

QuadInt quadint_from_json(const std::string& json_text, int d) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  BIANCHI_CHECK(j.is_array() && j.size() == 2,
                "quadint_from_json: expected [a, b]");
  auto coord = [](const nlohmann::json& v) {
    if (v.is_string()) return mpz_class(v.get<std::string>());
    BIANCHI_CHECK(v.is_number_integer(), "quadint_from_json: bad coordinate");
    return mpz_class(v.get<long>());
  };
  return QuadInt(coord(j[0]), coord(j[1]), d);
}

}  // namespace bianchi
