#include "bianchi/h1.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace bianchi {

GenActions<QuadInt> polynomial_actions(const GroupPresentation& p, int k, int l) {
  BIANCHI_CHECK(module_defined(p.kind, p.d, k, l),
                "polynomial module does not descend to this quotient (parity or unit action)");
  return make_gen_actions<QuadInt>(
      p.gens, [k, l](const Mat2& m) { return act_Ekl(m, k, l); });
}

AbelianDecomposition<QuadInt> h1_polynomial(const GroupPresentation& p, int k, int l) {
  return h1_from_action(p.relators, polynomial_actions(p, k, l));
}

AbelianDecomposition<QuadInt> h1_subgroup(const GroupPresentation& p, const CosetAction& T,
                                          int k, int l) {
  BIANCHI_CHECK(module_defined(p.kind, p.d, k, l),
                "polynomial module does not descend to this quotient (parity or unit action)");
  BIANCHI_CHECK(T.ngens() == static_cast<int>(p.gens.size()),
                "h1_subgroup: coset table generator count does not match the presentation");
  for (size_t j = 0; j < p.gens.size(); ++j)
    BIANCHI_CHECK(T.gens[j] == p.gens[j],
                  "h1_subgroup: coset table was built for different generators");
  GenActions<QuadInt> acts = coinduced_gen_actions<QuadInt>(
      T, [k, l](const Mat2& m) { return act_Ekl(m, k, l); });
  return h1_from_action(p.relators, acts);
}

// ---------------------------------------------------------------------------
// Sparse permutation-module path for trivial coefficients.
//
// With W = Z and coefficients coinduced from a subgroup of index n, every
// action matrix is the permutation matrix of the coset action, so the Fox
// blocks have entries in {0, +-1} with at most one nonzero per occurrence of
// a generator in a relator. We build them directly as sparse triplets. For
// the suffix-convention blocks (cohomology) we walk each relator right to
// left while tracking, for each ending coset c', the coset c' moved
// backwards through the suffix: the +-1 for an occurrence of generator j at
// position i lands in block row c'.suffix_i^-1 and block column c'. For the
// prefix-convention blocks (homology) we walk left to right from each
// starting coset c, and the +-1 lands in block row c and block column
// c.prefix.
//
// Two exact shortcuts replace the dense kernel/quotient machinery. Both rest
// on the same splitting: if K is the kernel of a map out of a free module C
// (so K is saturated and C/K is free) and im \subseteq K, then
// C/im = (K/im) + C/K with C/K free, so torsion(K/im) = torsion(C/im) and
// rank(K/im) = rank(C/im) - rank(C/K). Applied to homology this says the
// invariant factors of H_1 are the nontrivial Smith divisors of d2 alone,
// and the rank is dim C_1 - rank d1 - rank d2. Applied to cohomology, the
// torsion of H^1 is the nontrivial Smith divisors of the coboundary map,
// which is empty here because H^1 with these coefficients is Hom of an
// abelian group into Z; we assert that instead of assuming it.

namespace {

struct PermPair {
  long n = 0;
  int g = 0;
  std::vector<std::vector<int>> fwd, inv;
};

PermPair perm_pair(const CosetAction& T) {
  PermPair P;
  P.n = T.index();
  P.g = T.ngens();
  P.fwd = T.perm;
  P.inv.assign(static_cast<size_t>(P.g), std::vector<int>(static_cast<size_t>(P.n), -1));
  for (int j = 0; j < P.g; ++j) {
    BIANCHI_CHECK(static_cast<long>(P.fwd[static_cast<size_t>(j)].size()) == P.n,
                  "coset table: ragged permutation");
    for (long c = 0; c < P.n; ++c) {
      const int t = P.fwd[static_cast<size_t>(j)][static_cast<size_t>(c)];
      BIANCHI_CHECK(t >= 0 && t < P.n, "coset table: permutation image out of range");
      BIANCHI_CHECK(P.inv[static_cast<size_t>(j)][static_cast<size_t>(t)] < 0,
                    "coset table: generator action is not injective");
      P.inv[static_cast<size_t>(j)][static_cast<size_t>(t)] = static_cast<int>(c);
    }
  }
  return P;
}

long apply_letter(const PermPair& P, int letter, long c) {
  const int j = std::abs(letter) - 1;
  BIANCHI_CHECK(j >= 0 && j < P.g, "coset walk: letter outside generator range");
  return letter > 0 ? P.fwd[static_cast<size_t>(j)][static_cast<size_t>(c)]
                    : P.inv[static_cast<size_t>(j)][static_cast<size_t>(c)];
}

void check_relators_act_trivially(const PermPair& P, const std::vector<Word>& relators) {
  for (const Word& r : relators)
    for (long c = 0; c < P.n; ++c) {
      long t = c;
      for (int letter : r) t = apply_letter(P, letter, t);
      BIANCHI_CONTRACT(t == c, "coset table: relator does not act trivially on cosets");
    }
}

// Triplet sink: (fox row coset, generator, ending coset, relator, sign).
using FoxTripletSink = std::function<void(long c_row, int j, long c_col, long r, int sign)>;

void walk_fox_triplets(const PermPair& P, const std::vector<Word>& relators,
                       const FoxTripletSink& emit) {
  for (size_t r = 0; r < relators.size(); ++r) {
    const Word& w = relators[r];
    for (long cend = 0; cend < P.n; ++cend) {
      long t = cend;  // cend moved backwards through the current suffix
      for (long i = static_cast<long>(w.size()) - 1; i >= 0; --i) {
        const int letter = w[static_cast<size_t>(i)];
        const int j = std::abs(letter) - 1;
        if (letter > 0) {
          emit(t, j, cend, static_cast<long>(r), +1);
          t = apply_letter(P, -letter, t);
        } else {
          t = apply_letter(P, -letter, t);
          emit(t, j, cend, static_cast<long>(r), -1);
        }
      }
    }
  }
}

SparseMatZ rows_from_triplets(long nrows, long ncols,
                              std::vector<std::map<int, long long>>& acc) {
  SparseMatZ out;
  out.ncols = ncols;
  out.rows.resize(static_cast<size_t>(nrows));
  for (long i = 0; i < nrows; ++i)
    for (const auto& [col, val] : acc[static_cast<size_t>(i)])
      if (val != 0) out.rows[static_cast<size_t>(i)].push_back({col, val});
  return out;
}

// Stacked P_j - 1, (g n) x n.
SparseMatZ sparse_boundary1(const PermPair& P) {
  std::vector<std::map<int, long long>> acc(static_cast<size_t>(P.g * P.n));
  for (int j = 0; j < P.g; ++j)
    for (long c = 0; c < P.n; ++c) {
      const long row = static_cast<long>(j) * P.n + c;
      acc[static_cast<size_t>(row)][P.fwd[static_cast<size_t>(j)][static_cast<size_t>(c)]] += 1;
      acc[static_cast<size_t>(row)][static_cast<int>(c)] -= 1;
    }
  return rows_from_triplets(P.g * P.n, P.n, acc);
}

// Hstacked P_j - 1, n x (g n): the coboundary map of the coinduced module.
SparseMatZ sparse_coboundary(const PermPair& P) {
  std::vector<std::map<int, long long>> acc(static_cast<size_t>(P.n));
  for (int j = 0; j < P.g; ++j)
    for (long c = 0; c < P.n; ++c) {
      acc[static_cast<size_t>(c)][static_cast<int>(
          static_cast<long>(j) * P.n +
          P.fwd[static_cast<size_t>(j)][static_cast<size_t>(c)])] += 1;
      acc[static_cast<size_t>(c)][static_cast<int>(static_cast<long>(j) * P.n + c)] -= 1;
    }
  return rows_from_triplets(P.n, static_cast<long>(P.g) * P.n, acc);
}

// Cohomological relator matrix, (g n) x (R n): block (j, r) = D_j(r).
SparseMatZ sparse_relator_matrix(const PermPair& P, const std::vector<Word>& relators) {
  std::vector<std::map<int, long long>> acc(static_cast<size_t>(P.g * P.n));
  walk_fox_triplets(P, relators, [&](long c_row, int j, long c_col, long r, int sign) {
    acc[static_cast<size_t>(static_cast<long>(j) * P.n + c_row)]
       [static_cast<int>(r * P.n + c_col)] += sign;
  });
  return rows_from_triplets(P.g * P.n, static_cast<long>(relators.size()) * P.n, acc);
}

// Homological boundary, (R n) x (g n): row block r = [P_1(r) | ... | P_g(r)],
// prefix convention.
SparseMatZ sparse_boundary2(const PermPair& P, const std::vector<Word>& relators) {
  std::vector<std::map<int, long long>> acc(
      static_cast<size_t>(static_cast<long>(relators.size()) * P.n));
  for (size_t r = 0; r < relators.size(); ++r) {
    const Word& w = relators[r];
    for (long c = 0; c < P.n; ++c) {
      auto& row = acc[static_cast<size_t>(static_cast<long>(r) * P.n + c)];
      long t = c;  // c moved forward through the current prefix
      for (int letter : w) {
        const int j = std::abs(letter) - 1;
        if (letter > 0) {
          row[static_cast<int>(static_cast<long>(j) * P.n + t)] += 1;
          t = apply_letter(P, letter, t);
        } else {
          t = apply_letter(P, letter, t);
          row[static_cast<int>(static_cast<long>(j) * P.n + t)] -= 1;
        }
      }
    }
  }
  return rows_from_triplets(static_cast<long>(relators.size()) * P.n,
                            static_cast<long>(P.g) * P.n, acc);
}

}  // namespace

AbelianDecomposition<mpz_class> h1_subgroup_trivial(const GroupPresentation& p,
                                                    const CosetAction& T) {
  PermPair P = perm_pair(T);
  check_relators_act_trivially(P, p.relators);
  SparseMatZ delta = sparse_coboundary(P);
  SparseMatZ F = sparse_relator_matrix(P, p.relators);
  SparseSnfResult sd = sparse_snf(delta);
  BIANCHI_CONTRACT(sd.divisors.empty(),
                   "h1_subgroup_trivial: cohomology with these coefficients must be torsion-free");
  const long rank_f = sparse_rank_exactish(F);
  AbelianDecomposition<mpz_class> out;
  out.rank = static_cast<long>(P.g) * P.n - rank_f - sd.rank;
  BIANCHI_CONTRACT(out.rank >= 0, "h1_subgroup_trivial: negative rank");
  return out;
}

AbelianDecomposition<mpz_class> subgroup_abelianization_shapiro(const GroupPresentation& p,
                                                                const CosetAction& T) {
  PermPair P = perm_pair(T);
  check_relators_act_trivially(P, p.relators);
  SparseMatZ d1 = sparse_boundary1(P);
  SparseMatZ d2 = sparse_boundary2(P, p.relators);
  const long rank_d1 = sparse_rank_exactish(d1);
  // The coset action of the full group is transitive, so the image of d1 is
  // the augmentation sublattice of Z[cosets].
  BIANCHI_CONTRACT(rank_d1 == P.n - 1, "subgroup abelianization: coset action not transitive");
  SparseSnfResult s2 = sparse_snf(d2);
  AbelianDecomposition<mpz_class> out;
  out.divisors = s2.divisors;
  out.rank = static_cast<long>(P.g) * P.n - rank_d1 - s2.rank;
  BIANCHI_CONTRACT(out.rank >= 0, "subgroup abelianization: negative rank");
  return out;
}

// ---------------------------------------------------------------------------
// Mod-p dimension counting.

namespace {

MatFq matfq_identity(long n) {
  MatFq out(n, n);
  for (long i = 0; i < n; ++i) out.at(i, i) = fq_one();
  return out;
}

MatFq matfq_add_signed(const FqCtx& F, const MatFq& a, const MatFq& b, bool subtract) {
  BIANCHI_CHECK(a.nrows == b.nrows && a.ncols == b.ncols, "matfq add: shape");
  MatFq out(a.nrows, a.ncols);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = subtract ? fq_sub(F, a.data[i], b.data[i])
                           : fq_add(F, a.data[i], b.data[i]);
  return out;
}

// Relator matrix over the residue field, same suffix walk as fox_blocks.
MatFq fox_relator_matrix_fq(const FqCtx& F, const std::vector<Word>& relators,
                            const std::vector<MatFq>& fwd, const std::vector<MatFq>& inv) {
  BIANCHI_CHECK(!fwd.empty() && fwd.size() == inv.size(),
                "fox_relator_matrix_fq: bad action lists");
  const long dim = fwd[0].nrows;
  const int g = static_cast<int>(fwd.size());
  const MatFq id = matfq_identity(dim);
  for (int j = 0; j < g; ++j) {
    MatFq prod = matfq_mul(F, fwd[static_cast<size_t>(j)], inv[static_cast<size_t>(j)]);
    BIANCHI_CONTRACT(prod.data == id.data, "fox_relator_matrix_fq: inverse action mismatch");
  }

  MatFq rel(g * dim, static_cast<long>(relators.size()) * dim);
  for (size_t r = 0; r < relators.size(); ++r) {
    std::vector<MatFq> blocks(static_cast<size_t>(g), MatFq(dim, dim));
    MatFq suffix = id;
    const Word& w = relators[r];
    for (long i = static_cast<long>(w.size()) - 1; i >= 0; --i) {
      const int letter = w[static_cast<size_t>(i)];
      const int j = std::abs(letter) - 1;
      BIANCHI_CHECK(j >= 0 && j < g, "fox_relator_matrix_fq: letter outside generator range");
      if (letter > 0) {
        blocks[static_cast<size_t>(j)] =
            matfq_add_signed(F, blocks[static_cast<size_t>(j)], suffix, false);
        suffix = matfq_mul(F, fwd[static_cast<size_t>(j)], suffix);
      } else {
        suffix = matfq_mul(F, inv[static_cast<size_t>(j)], suffix);
        blocks[static_cast<size_t>(j)] =
            matfq_add_signed(F, blocks[static_cast<size_t>(j)], suffix, true);
      }
    }
    for (int j = 0; j < g; ++j)
      for (long a = 0; a < dim; ++a)
        for (long b = 0; b < dim; ++b)
          rel.at(j * dim + a, static_cast<long>(r) * dim + b) =
              blocks[static_cast<size_t>(j)].at(a, b);
  }
  return rel;
}

}  // namespace

long z1_dim_fq(const FqCtx& F, const std::vector<Word>& relators,
               const std::vector<MatFq>& fwd, const std::vector<MatFq>& inv) {
  const long dim = fwd.empty() ? 0 : fwd[0].nrows;
  const long g = static_cast<long>(fwd.size());
  MatFq rel = fox_relator_matrix_fq(F, relators, fwd, inv);
  return g * dim - matfq_rank(F, rel);
}

long h1_dim_fq(const FqCtx& F, const std::vector<Word>& relators,
               const std::vector<MatFq>& fwd, const std::vector<MatFq>& inv) {
  const long dim = fwd.empty() ? 0 : fwd[0].nrows;
  const int g = static_cast<int>(fwd.size());
  MatFq rel = fox_relator_matrix_fq(F, relators, fwd, inv);

  MatFq delta(dim, g * dim);
  for (int j = 0; j < g; ++j)
    for (long a = 0; a < dim; ++a)
      for (long b = 0; b < dim; ++b) {
        Fq v = fwd[static_cast<size_t>(j)].at(a, b);
        if (a == b) v = fq_sub(F, v, fq_one());
        delta.at(a, j * dim + b) = v;
      }

  const long z1 = g * dim - matfq_rank(F, rel);
  const long b1 = matfq_rank(F, delta);
  BIANCHI_CONTRACT(z1 >= b1, "h1_dim_fq: coboundaries exceed cocycles");
  return z1 - b1;
}

namespace {

void polynomial_actions_mod(const GroupPresentation& p, int k, int l, const ResidueMap& rm,
                            std::vector<MatFq>& fwd, std::vector<MatFq>& inv) {
  BIANCHI_CHECK(module_defined(p.kind, p.d, k, l),
                "polynomial module does not descend to this quotient (parity or unit action)");
  BIANCHI_CHECK(rm.d == p.d, "polynomial_actions_mod: residue map is for a different ring");
  for (const Mat2& g : p.gens) {
    fwd.push_back(act_Ekl_mod(g, k, l, rm));
    inv.push_back(act_Ekl_mod(mat2_inverse(g), k, l, rm));
  }
}

}  // namespace

long h1_polynomial_dim_mod(const GroupPresentation& p, int k, int l, const ResidueMap& rm) {
  std::vector<MatFq> fwd, inv;
  polynomial_actions_mod(p, k, l, rm, fwd, inv);
  return h1_dim_fq(rm.F, p.relators, fwd, inv);
}

long z1_polynomial_dim_mod(const GroupPresentation& p, int k, int l, const ResidueMap& rm) {
  std::vector<MatFq> fwd, inv;
  polynomial_actions_mod(p, k, l, rm, fwd, inv);
  return z1_dim_fq(rm.F, p.relators, fwd, inv);
}

// ---------------------------------------------------------------------------
// Coset tables from a membership predicate.

CosetAction coset_action_from_membership(const GroupPresentation& p,
                                         const std::function<bool(const Mat2&)>& member,
                                         long cap) {
  BIANCHI_CHECK(cap > 0, "coset_action_from_membership: nonpositive cap");
  BIANCHI_CHECK(member(Mat2::identity(p.d)),
                "coset_action_from_membership: identity fails the membership predicate");
  CosetAction T;
  T.kind = p.kind;
  T.gens = p.gens;
  T.transversal.push_back(Mat2::identity(p.d));
  const int g = static_cast<int>(p.gens.size());
  T.perm.assign(static_cast<size_t>(g), {});

  auto find_or_add = [&](const Mat2& u) -> int {
    for (size_t e = 0; e < T.transversal.size(); ++e)
      if (member(u * mat2_inverse(T.transversal[e]))) return static_cast<int>(e);
    BIANCHI_CHECK(static_cast<long>(T.transversal.size()) < cap,
                  "coset_action_from_membership: subgroup index exceeds cap");
    T.transversal.push_back(scalar_canonical(u, p.kind));
    for (int j = 0; j < g; ++j) T.perm[static_cast<size_t>(j)].push_back(-1);
    return static_cast<int>(T.transversal.size()) - 1;
  };

  for (int j = 0; j < g; ++j) T.perm[static_cast<size_t>(j)].push_back(-1);
  for (size_t c = 0; c < T.transversal.size(); ++c) {
    for (int j = 0; j < g; ++j) {
      const int fwd = find_or_add(T.transversal[c] * p.gens[static_cast<size_t>(j)]);
      BIANCHI_CONTRACT(T.perm[static_cast<size_t>(j)][c] < 0 ||
                           T.perm[static_cast<size_t>(j)][c] == fwd,
                       "coset enumeration: inconsistent forward image");
      T.perm[static_cast<size_t>(j)][c] = fwd;
      // Walking inverses too keeps the orbit complete even when some
      // generator has infinite order.
      const int back =
          find_or_add(T.transversal[c] * mat2_inverse(p.gens[static_cast<size_t>(j)]));
      BIANCHI_CONTRACT(T.perm[static_cast<size_t>(j)][static_cast<size_t>(back)] < 0 ||
                           T.perm[static_cast<size_t>(j)][static_cast<size_t>(back)] ==
                               static_cast<int>(c),
                       "coset enumeration: inconsistent backward image");
      T.perm[static_cast<size_t>(j)][static_cast<size_t>(back)] = static_cast<int>(c);
    }
  }
  for (int j = 0; j < g; ++j)
    for (int v : T.perm[static_cast<size_t>(j)])
      BIANCHI_CONTRACT(v >= 0, "coset enumeration: incomplete permutation");
  return T;
}

void validate_coset_action(const CosetAction& T, const GroupPresentation& p) {
  BIANCHI_CHECK(T.index() > 0, "coset table: empty transversal");
  BIANCHI_CHECK(T.ngens() == static_cast<int>(p.gens.size()),
                "coset table: generator count mismatch");
  for (size_t j = 0; j < p.gens.size(); ++j)
    BIANCHI_CHECK(T.gens[j] == p.gens[j], "coset table: generator matrices differ");
  BIANCHI_CHECK(T.transversal[0] == Mat2::identity(p.d),
                "coset table: transversal does not start at the identity");
  PermPair P = perm_pair(T);  // checks bijectivity
  check_relators_act_trivially(P, p.relators);
}

void validate_coset_action(const CosetAction& T, const GroupPresentation& p,
                           const std::function<bool(const Mat2&)>& member) {
  validate_coset_action(T, p);
  for (int j = 0; j < T.ngens(); ++j)
    for (long c = 0; c < T.index(); ++c) {
      BIANCHI_CHECK(member(coset_return_element(T, j, static_cast<int>(c), false)),
                    "coset table: forward return element escapes the subgroup");
      BIANCHI_CHECK(member(coset_return_element(T, j, static_cast<int>(c), true)),
                    "coset table: backward return element escapes the subgroup");
    }
}

}  // namespace bianchi
