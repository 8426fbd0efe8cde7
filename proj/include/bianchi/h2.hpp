#pragma once

// Second cohomology of the Bianchi groups in polynomial module coefficients,
// computed from the equivariant structure of the 2-cell quotient complex.
//
// The group Gamma acts on hyperbolic 3-space with a 2-dimensional
// deformation retract whose quotient is a single polygon; the CellComplex
// data gives orbit representatives for its cells together with their finite
// stabilizers and the transport elements identifying cell ends with
// translated representatives.  An equivariant cochain assigns to each cell
// orbit representative sigma a vector in the fixed sublattice M^{Gamma_sigma}
// and extends to translates by F(y * sigma) = F(sigma) * act(y)^-1 (row
// vectors, right action).  That gives a three-term complex
//
//   C^0 = (+)_vertices M^{Gamma_v}  -d0->  C^1 = (+)_edges M^{Gamma_e}
//                                   -d1->  C^2 = M,
//
// with d0 the signed difference of endpoint values (each transported to the
// edge) and d1 the signed sum of the polygon's side values (each transported
// to the face).  The face stabilizer is trivial, there are no 3-cells, and
// the spectral sequence of the action collapses along the bottom row after
// inverting the stabilizer orders, so
//
//   H^2(Gamma, M) = M / Im(d1)     (reliable away from 2 and 3),
//
// and rank(Ker d1 / Im d0) is the rank of H^1(Gamma, M), which we use as a
// cross-check against the Fox-calculus pipeline.  All stabilizer orders
// divide 24, so only the 2- and 3-parts of the answer are in doubt; they are
// still computed integrally and reported, but carry an "unreliable" flag
// instead of being inverted away.
//
// Everything is exact over O_d.  The fixed sublattices are saturated (they
// are kernels), so expressing a transported vertex lattice in an edge
// lattice's coordinates is an exact integral solve; that solve succeeding is
// itself a structural check, since it encodes that the edge stabilizer is
// contained in the transported endpoint stabilizers.

#include <vector>

#include <gmpxx.h>

#include "bianchi/exactla.hpp"
#include "bianchi/modp.hpp"
#include "bianchi/polymod.hpp"
#include "bianchi/presentations.hpp"
#include "bianchi/ring.hpp"

namespace bianchi {

// Saturated basis (rows) of the common fixed space of the given module
// actions: kernel_basis of the stacked blocks (act - I).  An empty list of
// actions (trivial stabilizer) fixes everything, giving the identity basis,
// which is why the ambient dimension is passed explicitly.
Mat<QuadInt> invariant_basis(const std::vector<Mat<QuadInt>>& stab_actions,
                             long dim, const QuadInt& proto);

// The assembled complex in the coordinates of the invariant bases.  Maps
// compose left to right on row vectors: d0 * d1 = 0 is enforced exactly.
struct EquivariantComplex {
    long dim = 0;  // O_d-dimension of M
    std::vector<Mat<QuadInt>> vertex_basis;  // rows span M^{Gamma_v}
    std::vector<Mat<QuadInt>> edge_basis;    // rows span M^{Gamma_e}
    Mat<QuadInt> d0;  // (sum dim M^{Gamma_v}) x (sum dim M^{Gamma_e})
    Mat<QuadInt> d1;  // (sum dim M^{Gamma_e}) x dim
};

EquivariantComplex assemble_complex(const CellComplex& complex, int k, int l);

struct H2Result {
    int d = 1;
    GroupKind kind = GroupKind::PGL;
    int k = 0;
    int l = 0;

    AbelianDecomposition<QuadInt> dec;  // of M / Im(d1) over O_d
    long rank = 0;                      // = dec.rank

    // Rational primes dividing some divisor norm, ascending.
    std::vector<mpz_class> torsion_primes;
    // Subset with k < p and l < p: torsion that the weight cannot explain.
    std::vector<mpz_class> large_primes;
    // Large primes that are additionally unramified in O_d.  Ramified ones
    // sit over the discriminant and have a cheap explanation of their own,
    // so only these mark genuinely unexplained torsion.
    std::vector<mpz_class> bold_primes;
    // Subset of {2,3}: stabilizer-order primes the collapse argument does
    // not cover, reported but advisory.
    std::vector<mpz_class> unreliable_primes;

    // rank of Ker(d1)/Im(d0), equal to rank H^1(Gamma, M); cross-checked
    // against the presentation pipeline in tests.
    long complex_h1_rank = 0;
};

// H^2(Gamma, E_{k,l}(O_d)) for the groups with an embedded cell complex:
// PGL_2 over all five rings and PSL_2(O_2).  For anything else this throws a
// domain error pointing at the external-data route (parse_cellcomplex_json
// accepts the documented JSON schema, and h2_from_complex takes the result).
H2Result h2(int d, GroupKind kind, int k, int l);
H2Result h2_from_complex(const CellComplex& complex, int k, int l);

// kappa-dimension of the pi-torsion of the decomposition: the number of
// invariant factors divisible by pi.  Used by the reduction exact sequence
//   0 -> H^1(M) (x) kappa -> H^1(M (x) kappa) -> H^2(M)[pi] -> 0.
long torsion_dim_at(const AbelianDecomposition<QuadInt>& dec, const QuadInt& pi);

// dim_kappa H^2(Gamma, E_{k,l})[pi] without the complex, valid at every
// prime including 2 and 3.  Reducing the coefficients mod pi gives the exact
// sequence above; combined with H^1[pi] = dim H^0(kappa) - rank H^0 (the
// integral H^0 is torsion-free here) everything except the Fox relator
// matrix cancels, leaving
//
//   dim H^2[pi] = rank_Q(relator matrix) - rank_kappa(relator matrix mod pi),
//
// the rank drop of the relator matrix of any presentation of Gamma at pi.
// The rational rank is recovered from the complex's H^1 rank as
// g*dim - dim Z^1, so no unbounded integer elimination is needed.  This is
// the oracle the equivariant route is tested against: away from 2 and 3 the
// two must agree, and at 2 and 3 it reports the true cohomology the collapse
// argument cannot certify.
long torsion_dim_h2_mod(const GroupPresentation& pres, int k, int l,
                        long rational_z1_dim, const ResidueMap& rm);

}  // namespace bianchi
