#include "bianchi/h2.hpp"

#include <sstream>
#include <utility>

#include "bianchi/factor.hpp"
#include "bianchi/h1.hpp"

namespace bianchi {

Mat<QuadInt> invariant_basis(const std::vector<Mat<QuadInt>>& stab_actions,
                             long dim, const QuadInt& proto) {
    if (stab_actions.empty()) return Mat<QuadInt>::identity(dim, proto);

    // Stack the blocks (act - I) side by side; the common fixed space is the
    // left kernel of the stack, and kernel_basis returns it saturated.
    const long ng = static_cast<long>(stab_actions.size());
    Mat<QuadInt> stacked(dim, ng * dim, proto);
    const QuadInt one = QuadInt::integer(1, proto.d);
    for (long g = 0; g < ng; ++g) {
        const Mat<QuadInt>& A = stab_actions[static_cast<size_t>(g)];
        BIANCHI_CHECK(A.nrows == dim && A.ncols == dim,
                      "invariant_basis: action has wrong shape");
        for (long i = 0; i < dim; ++i)
            for (long j = 0; j < dim; ++j) {
                stacked.at(i, g * dim + j) = A.at(i, j);
                if (i == j) stacked.at(i, g * dim + j) -= one;
            }
    }
    return kernel_basis(stacked);
}

namespace {

// Accumulate src into dst starting at (row0, col0).  Accumulation rather
// than assignment matters: a loop edge has both ends on the same vertex, and
// a polygon can traverse the same edge orbit twice.
void add_block(Mat<QuadInt>& dst, long row0, long col0,
               const Mat<QuadInt>& src, int sign) {
    for (long i = 0; i < src.nrows; ++i)
        for (long j = 0; j < src.ncols; ++j) {
            if (sign > 0)
                dst.at(row0 + i, col0 + j) += src.at(i, j);
            else
                dst.at(row0 + i, col0 + j) -= src.at(i, j);
        }
}

}  // namespace

EquivariantComplex assemble_complex(const CellComplex& complex, int k, int l) {
    BIANCHI_CHECK(module_defined(complex.kind, complex.d, k, l),
                  "assemble_complex: E_{k,l} does not descend to this group");
    const QuadInt proto = QuadInt::integer(0, complex.d);
    const long dim = static_cast<long>(k + 1) * (l + 1);

    // act(w)^-1 for a transport word: evaluate the word to a matrix first,
    // invert there, and push the single inverse matrix through the module
    // functor.  Exact because act is multiplicative.
    auto act_inv_of = [&](const Word& w) {
        return act_Ekl(mat2_inverse(complex.evaluate(w)), k, l);
    };

    std::vector<Mat<QuadInt>> gen_act;
    gen_act.reserve(complex.gens.size());
    for (const Mat2& g : complex.gens) gen_act.push_back(act_Ekl(g, k, l));

    EquivariantComplex out;
    out.dim = dim;

    std::vector<long> voff, eoff;
    long vtotal = 0, etotal = 0;
    for (const VertexCell& v : complex.vertices) {
        std::vector<Mat<QuadInt>> acts;
        for (int gi : v.stab_gens) acts.push_back(gen_act[static_cast<size_t>(gi)]);
        out.vertex_basis.push_back(invariant_basis(acts, dim, proto));
        voff.push_back(vtotal);
        vtotal += out.vertex_basis.back().nrows;
    }
    for (const EdgeCell& e : complex.edges) {
        std::vector<Mat<QuadInt>> acts;
        for (int gi : e.stab_gens) acts.push_back(gen_act[static_cast<size_t>(gi)]);
        out.edge_basis.push_back(invariant_basis(acts, dim, proto));
        eoff.push_back(etotal);
        etotal += out.edge_basis.back().nrows;
    }

    // d0: value of a cochain on an edge representative is the transported
    // "to" value minus the transported "from" value.  The transported vertex
    // lattice B_v * act(tau)^-1 lies inside the edge's fixed lattice (the
    // edge stabilizer sits inside the conjugated vertex stabilizer), and the
    // edge basis is saturated, so the change of coordinates is an exact
    // integral solve; solve_in_span throws if the data breaks that promise.
    out.d0 = Mat<QuadInt>(vtotal, etotal, proto);
    for (size_t ei = 0; ei < complex.edges.size(); ++ei) {
        const EdgeCell& e = complex.edges[ei];
        const Mat<QuadInt>& Be = out.edge_basis[ei];
        const auto end_block = [&](const EdgeEnd& end) {
            const Mat<QuadInt>& Bv =
                out.vertex_basis[static_cast<size_t>(end.vertex)];
            return solve_in_span(Be, Bv * act_inv_of(end.transport));
        };
        add_block(out.d0, voff[static_cast<size_t>(e.to.vertex)], eoff[ei],
                  end_block(e.to), +1);
        add_block(out.d0, voff[static_cast<size_t>(e.from.vertex)], eoff[ei],
                  end_block(e.from), -1);
    }

    // d1: signed sum of the polygon's sides, each side's edge value
    // transported to the face.  A glued side pair contributes its edge twice
    // with opposite signs and different transports, which is what makes the
    // composite with d0 cancel.
    out.d1 = Mat<QuadInt>(etotal, dim, proto);
    for (const FaceSide& s : complex.face) {
        const Mat<QuadInt>& Be = out.edge_basis[static_cast<size_t>(s.edge)];
        add_block(out.d1, eoff[static_cast<size_t>(s.edge)], 0,
                  Be * act_inv_of(s.transport), s.sign);
    }

    BIANCHI_CONTRACT((out.d0 * out.d1).is_zero(),
                     "assemble_complex: d1 after d0 is not zero on invariants");
    return out;
}

H2Result h2_from_complex(const CellComplex& complex, int k, int l) {
    EquivariantComplex C = assemble_complex(complex, k, l);

    H2Result out;
    out.d = complex.d;
    out.kind = complex.kind;
    out.k = k;
    out.l = l;

    // No 3-cells, so H^2 is the plain cokernel of d1 inside M and the Smith
    // form of d1 is the whole computation. The cokernel variant keeps every
    // intermediate entry below a fixed minor of d1; the unbounded form runs
    // out of memory on these matrices once the module dimension passes ~50.
    SnfResult<QuadInt> s1 = snf_cokernel(C.d1);
    for (const QuadInt& e : s1.divisors)
        if (!is_unit(e)) out.dec.divisors.push_back(e);
    out.dec.rank = C.dim - s1.rank;
    out.rank = out.dec.rank;

    TorsionReport tr = torsion_primes_of(out.dec.divisor_norms(),
                                         /*budget_secs=*/10.0);
    BIANCHI_CONTRACT(tr.unfactored.empty(),
                     "h2: divisor norm resisted factoring; raise the budget");
    out.torsion_primes = tr.primes;
    for (const mpz_class& p : tr.primes) {
        if (p > k && p > l) {
            out.large_primes.push_back(p);
            BIANCHI_CONTRACT(p.fits_slong_p(), "h2: large prime out of long range");
            if (split_type(complex.d, p.get_si()).kind != SplitKind::ramified)
                out.bold_primes.push_back(p);
        }
        if (p == 2 || p == 3) out.unreliable_primes.push_back(p);
    }

    const long ker_d1 = C.d1.nrows - s1.rank;
    out.complex_h1_rank = ker_d1 - rank_bareiss(C.d0);
    BIANCHI_CONTRACT(out.complex_h1_rank >= 0,
                     "h2: negative H^1 rank from the complex");
    return out;
}

H2Result h2(int d, GroupKind kind, int k, int l) {
    BIANCHI_CHECK(valid_d(d), "h2: unsupported ring");
    if (kind == GroupKind::PSL && d != 2) {
        std::ostringstream os;
        os << "h2: no embedded cell complex for PSL_2(O_" << d
           << "); provide one externally (parse_cellcomplex_json on a "
              "bianchi-cell-complex-v1 file, then h2_from_complex)";
        throw domain_error(os.str());
    }
    return h2_from_complex(load_cellcomplex(d, kind), k, l);
}

long torsion_dim_at(const AbelianDecomposition<QuadInt>& dec,
                    const QuadInt& pi) {
    BIANCHI_CHECK(!pi.is_zero() && !is_unit(pi), "torsion_dim_at: pi not prime");
    long count = 0;
    for (const QuadInt& e : dec.divisors)
        if (divides(pi, e)) ++count;
    return count;
}

long torsion_dim_h2_mod(const GroupPresentation& pres, int k, int l,
                        long rational_z1_dim, const ResidueMap& rm) {
    const long drop = z1_polynomial_dim_mod(pres, k, l, rm) - rational_z1_dim;
    BIANCHI_CONTRACT(drop >= 0, "torsion_dim_h2_mod: modular rank exceeds rational rank");
    return drop;
}

}  // namespace bianchi
