#pragma once

// First cohomology and homology of a presented group via Fox calculus.
//
// Let G = <x_1, ..., x_g | r_1, ..., r_R> act on the right of a module W
// (row vectors, w -> w * act(x)). A 1-cocycle is a map c: G -> W with
//
//     c(uv) = c(u) act(v) + c(v),      c(x^-1) = -c(x) act(x^-1),
//
// so c is determined by its values on the generators subject to one linear
// condition c(r) = 0 per relator. Expanding c(r) through the recursion gives
//
//     c(r) = sum_j c(x_j) D_j(r),
//     D_j(r) = sum_{i: l_i = +j} act(suffix_i) - sum_{i: l_i = -j} act(suffix_{i-1}),
//
// where suffix_i is the product of the letters of r strictly after position
// i. The D_j(r) are the Fox derivatives of r evaluated through the action.
// Flattening generator values into one row vector of length g*dim, the
// cocycle space Z^1 is the left kernel of the (g dim) x (R dim) relator
// matrix with block (j, r) = D_j(r); coboundaries B^1 are the rows of the
// dim x (g dim) matrix [act(x_1)-1 | ... | act(x_g)-1], and
// H^1 = Z^1 / B^1 comes out of exactla.quotient_decomposition.
//
// The suffix-convention derivatives satisfy the fundamental identity with
// the generator factor on the left,
//
//     sum_j (act(x_j) - 1) D_j(w) = act(w) - 1,
//
// which is exactly the statement that coboundaries are cocycles. Homology
// wants the factor on the other side, so it uses the mirror (prefix)
// derivatives P_j(w) = sum_{+j} act(prefix_{i-1}) - sum_{-j} act(prefix_i),
// which satisfy sum_j P_j(w) (act(x_j) - 1) = act(w) - 1. With boundary maps
//
//     d1 = vstack_j(act(x_j) - 1)                (g dim) x dim,
//     d2 = one row block [P_1(r) | ... | P_g(r)] per relator,
//
// that identity makes d2 * d1 = 0 on relators, and H_1 = ker(d1) / im(d2).
// With trivial coefficients this is literally the abelianization of G, which
// is what ties the congruence subgroup tables back to this code path through
// Shapiro's lemma: H_*(G, coinduced W from a subgroup) = H_*(subgroup, W).

#include <cstdlib>
#include <functional>
#include <vector>

#include "bianchi/exactla.hpp"
#include "bianchi/modp.hpp"
#include "bianchi/polymod.hpp"
#include "bianchi/presentations.hpp"

namespace bianchi {

// Per-generator action matrices with their inverses. Inverses are supplied
// by the caller rather than computed: every caller gets them for free by
// acting on the inverse of the defining 2x2 matrix.
template <class E>
struct GenActions {
  long dim = 0;
  E proto{};
  std::vector<Mat<E>> fwd, inv;

  int ngens() const { return static_cast<int>(fwd.size()); }
};

template <class E>
GenActions<E> make_gen_actions(const std::vector<Mat2>& gens,
                               const std::function<Mat<E>(const Mat2&)>& factory) {
  BIANCHI_CHECK(!gens.empty(), "make_gen_actions: no generators");
  GenActions<E> out;
  for (const Mat2& g : gens) {
    out.fwd.push_back(factory(g));
    out.inv.push_back(factory(mat2_inverse(g)));
  }
  out.dim = out.fwd[0].nrows;
  out.proto = out.fwd[0].proto;
  const Mat<E> id = Mat<E>::identity(out.dim, out.proto);
  for (int j = 0; j < out.ngens(); ++j) {
    BIANCHI_CHECK(out.fwd[static_cast<size_t>(j)].nrows == out.dim &&
                      out.fwd[static_cast<size_t>(j)].ncols == out.dim,
                  "make_gen_actions: ragged action dimensions");
    BIANCHI_CONTRACT(out.fwd[static_cast<size_t>(j)] * out.inv[static_cast<size_t>(j)] == id,
                     "make_gen_actions: action of inverse is not the inverse action");
  }
  return out;
}

// Coinduced actions for a finite-index subgroup described by a coset table.
template <class E>
GenActions<E> coinduced_gen_actions(const CosetAction& T,
                                    const std::function<Mat<E>(const Mat2&)>& base_act) {
  BIANCHI_CHECK(T.ngens() > 0 && T.index() > 0, "coinduced_gen_actions: empty coset table");
  GenActions<E> out;
  for (int j = 0; j < T.ngens(); ++j) {
    out.fwd.push_back(coinduce<E>(T, j, /*inverse=*/false, base_act));
    out.inv.push_back(coinduce<E>(T, j, /*inverse=*/true, base_act));
  }
  out.dim = out.fwd[0].nrows;
  out.proto = out.fwd[0].proto;
  const Mat<E> id = Mat<E>::identity(out.dim, out.proto);
  for (int j = 0; j < out.ngens(); ++j)
    BIANCHI_CONTRACT(out.fwd[static_cast<size_t>(j)] * out.inv[static_cast<size_t>(j)] == id,
                     "coinduced_gen_actions: block action is not invertible");
  return out;
}

// Suffix-convention Fox derivative blocks of one word: one dim x dim block
// per generator, built right to left so each letter costs one matrix product.
template <class E>
std::vector<Mat<E>> fox_blocks(const Word& w, const GenActions<E>& act) {
  std::vector<Mat<E>> blocks(static_cast<size_t>(act.ngens()),
                             Mat<E>(act.dim, act.dim, act.proto));
  Mat<E> suffix = Mat<E>::identity(act.dim, act.proto);
  for (long i = static_cast<long>(w.size()) - 1; i >= 0; --i) {
    const int letter = w[static_cast<size_t>(i)];
    const int j = std::abs(letter) - 1;
    BIANCHI_CHECK(j >= 0 && j < act.ngens(), "fox_blocks: letter outside generator range");
    if (letter > 0) {
      blocks[static_cast<size_t>(j)] = blocks[static_cast<size_t>(j)] + suffix;
      suffix = act.fwd[static_cast<size_t>(j)] * suffix;
    } else {
      suffix = act.inv[static_cast<size_t>(j)] * suffix;
      blocks[static_cast<size_t>(j)] = blocks[static_cast<size_t>(j)] - suffix;
    }
  }
  return blocks;
}

// Prefix-convention (mirror) derivatives, used by the homological boundary.
template <class E>
std::vector<Mat<E>> fox_blocks_prefix(const Word& w, const GenActions<E>& act) {
  std::vector<Mat<E>> blocks(static_cast<size_t>(act.ngens()),
                             Mat<E>(act.dim, act.dim, act.proto));
  Mat<E> prefix = Mat<E>::identity(act.dim, act.proto);
  for (int letter : w) {
    const int j = std::abs(letter) - 1;
    BIANCHI_CHECK(j >= 0 && j < act.ngens(),
                  "fox_blocks_prefix: letter outside generator range");
    if (letter > 0) {
      blocks[static_cast<size_t>(j)] = blocks[static_cast<size_t>(j)] + prefix;
      prefix = prefix * act.fwd[static_cast<size_t>(j)];
    } else {
      prefix = prefix * act.inv[static_cast<size_t>(j)];
      blocks[static_cast<size_t>(j)] = blocks[static_cast<size_t>(j)] - prefix;
    }
  }
  return blocks;
}

// dim x (g dim): row m maps to (m act(x_1) - m, ..., m act(x_g) - m).
template <class E>
Mat<E> coboundary_matrix(const GenActions<E>& act) {
  Mat<E> out(act.dim, act.ngens() * act.dim, act.proto);
  const Mat<E> id = Mat<E>::identity(act.dim, act.proto);
  for (int j = 0; j < act.ngens(); ++j) {
    Mat<E> blk = act.fwd[static_cast<size_t>(j)] - id;
    for (long r = 0; r < act.dim; ++r)
      for (long c = 0; c < act.dim; ++c) out.at(r, j * act.dim + c) = blk.at(r, c);
  }
  return out;
}

// (g dim) x (R dim) matrix whose left kernel is Z^1: block (j, r) = D_j(r_r).
template <class E>
Mat<E> relator_matrix(const std::vector<Word>& relators, const GenActions<E>& act) {
  Mat<E> F(act.ngens() * act.dim, static_cast<long>(relators.size()) * act.dim, act.proto);
  for (size_t r = 0; r < relators.size(); ++r) {
    std::vector<Mat<E>> blocks = fox_blocks(relators[r], act);
    for (int j = 0; j < act.ngens(); ++j)
      for (long a = 0; a < act.dim; ++a)
        for (long b = 0; b < act.dim; ++b)
          F.at(j * act.dim + a, static_cast<long>(r) * act.dim + b) =
              blocks[static_cast<size_t>(j)].at(a, b);
  }
  return F;
}

// (g dim) x dim stack of act(x_j) - 1 (the degree-1 boundary map).
template <class E>
Mat<E> boundary1_matrix(const GenActions<E>& act) {
  Mat<E> out(act.ngens() * act.dim, act.dim, act.proto);
  const Mat<E> id = Mat<E>::identity(act.dim, act.proto);
  for (int j = 0; j < act.ngens(); ++j) {
    Mat<E> blk = act.fwd[static_cast<size_t>(j)] - id;
    for (long r = 0; r < act.dim; ++r)
      for (long c = 0; c < act.dim; ++c) out.at(j * act.dim + r, c) = blk.at(r, c);
  }
  return out;
}

// (R dim) x (g dim): one row block [P_1(r) | ... | P_g(r)] per relator (the
// degree-2 boundary map of the presentation complex), prefix convention.
template <class E>
Mat<E> boundary2_matrix(const std::vector<Word>& relators, const GenActions<E>& act) {
  Mat<E> out(static_cast<long>(relators.size()) * act.dim, act.ngens() * act.dim, act.proto);
  for (size_t r = 0; r < relators.size(); ++r) {
    std::vector<Mat<E>> blocks = fox_blocks_prefix(relators[r], act);
    for (int j = 0; j < act.ngens(); ++j)
      for (long a = 0; a < act.dim; ++a)
        for (long b = 0; b < act.dim; ++b)
          out.at(static_cast<long>(r) * act.dim + a, j * act.dim + b) =
              blocks[static_cast<size_t>(j)].at(a, b);
  }
  return out;
}

// H^1(G, W) = Z^1 / B^1. The relators must act as the identity on W (checked
// indirectly: coboundaries must be cocycles, which fails loudly otherwise).
//
// Two exact routes to the same decomposition:
//   * small systems: kernel_basis + quotient_decomposition, literally
//     Z^1 / B^1;
//   * large systems: Z^1 is the kernel of a map into a free module, hence
//     saturated with free quotient, so coker(coboundary) = H^1 + free.
//     The invariant factors of H^1 are then the nontrivial Smith divisors
//     of the small coboundary matrix, and
//     rank H^1 = g dim - rank(relator matrix) - rank(coboundary), with the
//     big rank computed fraction-free. Transform-tracking elimination on
//     the relator matrix suffers exponential entry growth once the cocycle
//     ambient dimension passes roughly eighty (the threshold is set by the
//     worst case over the five rings, the long translation relators of
//     O_2), which is why the dispatch exists; the two routes are
//     cross-checked by tests on rows where both are affordable.
template <class E>
AbelianDecomposition<E> h1_from_action(const std::vector<Word>& relators,
                                       const GenActions<E>& act) {
  using T = ring_traits<E>;
  Mat<E> F = relator_matrix(relators, act);
  Mat<E> delta = coboundary_matrix(act);
  BIANCHI_CONTRACT((delta * F).is_zero(), "h1_from_action: coboundaries are not cocycles");
  const long gdim = act.ngens() * act.dim;
  if (gdim <= 80) {
    Mat<E> Z = kernel_basis(F);
    return quotient_decomposition(Z, delta);
  }
  SnfResult<E> sd = snf(delta);
  AbelianDecomposition<E> out;
  for (const E& e : sd.divisors)
    if (!T::is_unit(e)) out.divisors.push_back(e);
  out.rank = gdim - rank_bareiss(std::move(F)) - sd.rank;
  BIANCHI_CONTRACT(out.rank >= 0, "h1_from_action: negative rank");
  return out;
}

// H_1(G, W) = ker(d1) / im(d2). With W = trivial coefficients this is the
// abelianization of G.
template <class E>
AbelianDecomposition<E> homology1_from_action(const std::vector<Word>& relators,
                                              const GenActions<E>& act) {
  Mat<E> d1 = boundary1_matrix(act);
  Mat<E> d2 = boundary2_matrix(relators, act);
  BIANCHI_CONTRACT((d2 * d1).is_zero(), "homology1_from_action: d2 d1 != 0");
  Mat<E> Z = kernel_basis(d1);
  return quotient_decomposition(Z, d2);
}

// Action matrices of the generators on E_{k,l}. Throws if the module does not
// descend to the quotient (PSL with odd k+l, or units acting nontrivially).
GenActions<QuadInt> polynomial_actions(const GroupPresentation& p, int k, int l);

// H^1 of the presented group with E_{k,l} coefficients over O_d.
AbelianDecomposition<QuadInt> h1_polynomial(const GroupPresentation& p, int k, int l);

// H^1 of the finite-index subgroup described by the coset table, with
// E_{k,l} coefficients, computed by Shapiro as H^1 of the ambient group with
// coinduced coefficients. Never builds a subgroup presentation.
AbelianDecomposition<QuadInt> h1_subgroup(const GroupPresentation& p, const CosetAction& T,
                                          int k, int l);

// Same Shapiro route with trivial Z coefficients, cohomological. This equals
// Hom(subgroup^ab, Z), so only the rank carries information; the divisor list
// is asserted empty. Sparse internally, see the source for the splitting
// argument.
AbelianDecomposition<mpz_class> h1_subgroup_trivial(const GroupPresentation& p,
                                                    const CosetAction& T);

// Abelianization of the subgroup, including torsion: homological Shapiro,
// H_1 of the ambient group with coefficients coinduced from trivial Z.
AbelianDecomposition<mpz_class> subgroup_abelianization_shapiro(const GroupPresentation& p,
                                                                const CosetAction& T);

// dim_kappa H^1(G, W) for an action over a finite field: g*dim minus the
// ranks of the relator and coboundary matrices.
long h1_dim_fq(const FqCtx& F, const std::vector<Word>& relators,
               const std::vector<MatFq>& fwd, const std::vector<MatFq>& inv);

// dim_kappa of the cocycle space Z^1 alone: g*dim minus the rank of the
// relator matrix. Comparing this dimension across residue fields measures
// the rank drop of the Fox relator matrix, which is exactly the kappa
// dimension of the pi-torsion of H^2 (see torsion_dim_h2_mod in h2.hpp).
long z1_dim_fq(const FqCtx& F, const std::vector<Word>& relators,
               const std::vector<MatFq>& fwd, const std::vector<MatFq>& inv);

// Mod-p shortcuts for E_{k,l} through a residue map: reduce each generator
// action and count dimensions over the residue field.
long h1_polynomial_dim_mod(const GroupPresentation& p, int k, int l, const ResidueMap& rm);
long z1_polynomial_dim_mod(const GroupPresentation& p, int k, int l, const ResidueMap& rm);

// Coset table of the subgroup cut out by a membership predicate, built by
// orbit enumeration from the identity coset. The predicate must be blind to
// the scalars identified by p.kind. Throws domain_error past cap cosets.
CosetAction coset_action_from_membership(const GroupPresentation& p,
                                         const std::function<bool(const Mat2&)>& member,
                                         long cap);

// Structural checks: transversal[0] = 1, each perm a bijection, relators act
// trivially on cosets, and (when a membership predicate is supplied) every
// return element lies in the subgroup.
void validate_coset_action(const CosetAction& T, const GroupPresentation& p);
void validate_coset_action(const CosetAction& T, const GroupPresentation& p,
                           const std::function<bool(const Mat2&)>& member);

}  // namespace bianchi
