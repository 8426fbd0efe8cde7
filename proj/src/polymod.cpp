#include "bianchi/polymod.hpp"

namespace bianchi {

const char* group_kind_name(GroupKind g) {
  return g == GroupKind::PSL ? "psl" : "pgl";
}

// Coefficient vector of (x + y*w-style binomial)^n: out[r] = C(n,r) a^(n-r) b^r.
static std::vector<QuadInt> binom_pow(const QuadInt& a, const QuadInt& b,
                                      int n) {
  std::vector<QuadInt> out;
  out.reserve(n + 1);
  QuadInt apow(1, 0, a.d);
  std::vector<QuadInt> apows;  // a^0 .. a^n
  for (int i = 0; i <= n; ++i) {
    apows.push_back(apow);
    apow = apow * a;
  }
  QuadInt bpow(1, 0, a.d);
  for (int r = 0; r <= n; ++r) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), n, r);
    out.push_back(QuadInt(c, 0, a.d) * apows[n - r] * bpow);
    bpow = bpow * b;
  }
  return out;
}

Mat<QuadInt> act_Ek(const Mat2& M, int k) {
  BIANCHI_CHECK(k >= 0, "act_Ek: negative degree");
  const int d = M.ring_d();
  const QuadInt zero(0, 0, d);
  Mat<QuadInt> out(k + 1, k + 1, zero);
  for (int i = 0; i <= k; ++i) {
    // X^(k-i) Y^i -> (aX + bY)^(k-i) (cX + dY)^i, coefficients by
    // convolution of the two binomial expansions (indexed by Y-degree).
    std::vector<QuadInt> f = binom_pow(M.m00, M.m01, k - i);
    std::vector<QuadInt> g = binom_pow(M.m10, M.m11, i);
    for (size_t r = 0; r < f.size(); ++r)
      for (size_t s = 0; s < g.size(); ++s)
        out.at(i, static_cast<long>(r + s)) =
            out.at(i, static_cast<long>(r + s)) + f[r] * g[s];
  }
  return out;
}

Mat<QuadInt> act_Ekl(const Mat2& M, int k, int l) {
  return kronecker(act_Ek(M, k), act_Ek(M.conjugated(), l));
}

bool module_defined(GroupKind g, int d, int k, int l) {
  if (g == GroupKind::PSL) return (k + l) % 2 == 0;
  // PGL: every unit scalar must act trivially.
  int m = k - l;
  if (d == 1) return m % 4 == 0;
  if (d == 3) return m % 6 == 0;
  return (k + l) % 2 == 0;
}

MatFq act_Ekl_mod(const Mat2& M, int k, int l, const ResidueMap& rm) {
  Mat<QuadInt> A = act_Ekl(M, k, l);
  MatFq out(A.nrows, A.ncols);
  for (long i = 0; i < A.nrows; ++i)
    for (long j = 0; j < A.ncols; ++j) out.at(i, j) = rm(A.at(i, j));
  return out;
}

static Mat<QuadInt> gram_one_factor(int d, int k) {
  // <X^(k-i) Y^i, X^(k-j) Y^j> = (-1)^i / C(k,i) when j = k - i, else 0.
  // Scaled by k! to clear denominators: entry (-1)^i * k!/C(k,i).
  const QuadInt zero(0, 0, d);
  Mat<QuadInt> g(k + 1, k + 1, zero);
  mpz_class kfact;
  mpz_fac_ui(kfact.get_mpz_t(), k);
  for (int i = 0; i <= k; ++i) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), k, i);
    mpz_class entry = kfact / c;
    if (i % 2 == 1) entry = -entry;
    g.at(i, k - i) = QuadInt(entry, 0, d);
  }
  return g;
}

PairingGram pairing_gram(int d, int k, int l) {
  PairingGram out;
  out.num = kronecker(gram_one_factor(d, k), gram_one_factor(d, l));
  mpz_class kf, lf;
  mpz_fac_ui(kf.get_mpz_t(), k);
  mpz_fac_ui(lf.get_mpz_t(), l);
  out.den = kf * lf;
  return out;
}

int coset_preimage(const CosetAction& T, int g, int c) {
  BIANCHI_CHECK(g >= 0 && g < T.ngens(), "coset_preimage: generator index out of range");
  const std::vector<int>& p = T.perm[static_cast<size_t>(g)];
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] == c) return static_cast<int>(i);
  BIANCHI_CHECK(false, "coset_preimage: permutation is not surjective");
  return -1;
}

Mat2 coset_return_element(const CosetAction& T, int g, int c, bool inverse) {
  BIANCHI_CHECK(g >= 0 && g < T.ngens() && c >= 0 && c < T.index(),
                "coset_return_element: index out of range");
  Mat2 gm = T.gens[static_cast<size_t>(g)];
  int target;
  if (inverse) {
    gm = mat2_inverse(gm);
    target = coset_preimage(T, g, c);
  } else {
    target = T.perm[static_cast<size_t>(g)][static_cast<size_t>(c)];
  }
  return T.transversal[static_cast<size_t>(c)] * gm *
         mat2_inverse(T.transversal[static_cast<size_t>(target)]);
}

}  // namespace bianchi
