#pragma once

// The coefficient modules E_{k,l}(O_d): homogeneous polynomials of degree k
// in (X, Y) tensored with degree-l polynomials in the Galois-conjugate
// variables. A matrix M = (a b; c d) acts on the right by substitution,
// P -> P(aX + bY, cX + dY), conjugated entries on the second factor.
//
// Basis and indexing, fixed for every consumer of these matrices: the first
// factor is X^(k-i) Y^i for i = 0..k, the second likewise with j = 0..l, and
// the pair (i, j) sits at index i*(l+1) + j. act_Ekl is then literally the
// Kronecker product act_Ek(M, k) (x) act_Ek(conj M, l), with row vectors
// acting on the right so act(MN) = act(M) * act(N) in plain matrix order.
//
// Which (k, l) make sense depends on the group. -I acts by (-1)^(k+l), so
// PSL coefficients need k + l even. PGL classes are taken mod all units, so
// the scalar action lambda^k * conj(lambda)^l must be trivial for every unit
// lambda: that means 4 | k - l over Z[i], 6 | k - l over the Eisenstein
// integers, and k + l even for d = 2, 7, 11. The diagonal modules E_{n,n}
// used by the cohomology tables pass all of these for every n.

#include <functional>
#include <vector>

#include "bianchi/exactla.hpp"
#include "bianchi/modp.hpp"
#include "bianchi/ring.hpp"

namespace bianchi {

enum class GroupKind { PSL, PGL };
const char* group_kind_name(GroupKind g);

inline long module_dim(int k, int l) {
  return static_cast<long>(k + 1) * (l + 1);
}

// Right action of M on degree-k homogeneous polynomials; (k+1) x (k+1).
Mat<QuadInt> act_Ek(const Mat2& M, int k);

// Right action on E_{k,l}; (k+1)(l+1) square.
Mat<QuadInt> act_Ekl(const Mat2& M, int k, int l);

// Whether E_{k,l} carries a well-defined action of the given quotient.
bool module_defined(GroupKind g, int d, int k, int l);

// Entrywise reduction of act_Ekl through a residue map. The conjugation
// twist on the second tensor factor is already baked into the integral
// matrix, so reduction commutes with everything downstream.
MatFq act_Ekl_mod(const Mat2& M, int k, int l, const ResidueMap& rm);

// The equivariant pairing E_{k,l} x E_{k,l} -> O[1/(k! l!)]. Returned as an
// integral matrix over a common denominator k! * l!; the Gram matrix is
// antidiagonal in each tensor factor with entries (+-1) * k!/binom(k,i).
struct PairingGram {
  Mat<QuadInt> num;
  mpz_class den;
};
PairingGram pairing_gram(int d, int k, int l);

template <class E>
Mat<E> transpose(const Mat<E>& a) {
  Mat<E> out(a.ncols, a.nrows, a.proto);
  for (long i = 0; i < a.nrows; ++i)
    for (long j = 0; j < a.ncols; ++j) out.at(j, i) = a.at(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Coset actions and coinduction.
//
// A finite-index subgroup of a presented matrix group is described by a right
// coset table: a transversal t_0 = 1, t_1, ..., t_{n-1} together with the
// permutation action of each generator on the cosets.  For a module W with a
// right action of the ambient group, the coinduced module is W^n with g
// acting by the block matrix whose only nonzero block in block row c sits in
// block column c.g and equals the W-action of the return element
//
//     r(c, g) = t_c g t_{c.g}^{-1},
//
// which lies in the subgroup.  The cocycle r(c, g) r(c.g, h) = r(c, gh)
// makes this a group action, and Shapiro's lemma identifies the (co)homology
// of the ambient group with coinduced coefficients with the (co)homology of
// the subgroup with coefficients in W.

struct CosetAction {
  GroupKind kind = GroupKind::PSL;
  std::vector<Mat2> gens;                // generators of the ambient group
  std::vector<Mat2> transversal;         // transversal[0] must be the identity
  std::vector<std::vector<int>> perm;    // perm[g][c] = coset of transversal[c] * gens[g]

  long index() const { return static_cast<long>(transversal.size()); }
  int ngens() const { return static_cast<int>(gens.size()); }
};

// Coset hit by right multiplication with gens[g]^{-1}, i.e. the c' with
// perm[g][c'] == c.
int coset_preimage(const CosetAction& T, int g, int c);

// t_c g t_{c.g}^{-1}, or the analogous element for g^{-1} when inverse is
// set.  Lies in the subgroup up to a unit scalar; callers feed it to module
// actions that are blind to the scalars identified by the quotient kind.
Mat2 coset_return_element(const CosetAction& T, int g, int c, bool inverse);

// Block action matrix of gens[g] (or its inverse) on the coinduced module.
// base_act must send a 2x2 matrix to the square action matrix of W and be
// multiplicative; block (c, c.g) = base_act(return element), zero elsewhere.
template <class E>
Mat<E> coinduce(const CosetAction& T, int g, bool inverse,
                const std::function<Mat<E>(const Mat2&)>& base_act) {
  const long n = T.index();
  BIANCHI_CHECK(n > 0 && g >= 0 && g < T.ngens(), "coinduce: bad coset table or generator index");
  Mat<E> probe = base_act(Mat2::identity(T.gens[static_cast<size_t>(g)].ring_d()));
  BIANCHI_CHECK(probe.nrows == probe.ncols, "coinduce: base action is not square");
  const long dim = probe.nrows;
  Mat<E> out(n * dim, n * dim, probe.proto);
  for (long c = 0; c < n; ++c) {
    const long target = inverse ? coset_preimage(T, g, static_cast<int>(c))
                                : T.perm[static_cast<size_t>(g)][static_cast<size_t>(c)];
    Mat<E> blk = base_act(coset_return_element(T, g, static_cast<int>(c), inverse));
    for (long i = 0; i < dim; ++i)
      for (long j = 0; j < dim; ++j) out.at(c * dim + i, target * dim + j) = blk.at(i, j);
  }
  return out;
}

}  // namespace bianchi
