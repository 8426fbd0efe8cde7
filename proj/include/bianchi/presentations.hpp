#pragma once

// Finitely presented arithmetic groups and the quotient cell complexes they
// act on.
//
// Words are vectors of nonzero ints: letter +k stands for generator k-1,
// letter -k for its inverse.  In data files words are strings over the
// generator names (single lowercase letters), with the uppercase letter
// standing for the inverse, e.g. "GbgAB" means g^-1 b g a^-1 b^-1.
//
// A CellComplex describes one 2-cell orbit of the action on hyperbolic
// 3-space: the vertex and edge orbit representatives with their finite
// stabilizers, and the boundary of the 2-cell.  An edge end may sit on a
// translate of its representative vertex; the end then carries a transport
// word tau, meaning the actual endpoint is tau * rep.  Likewise a face side
// may traverse a translate of its representative edge.
//
// Presentations are produced three ways, all validated at load time:
//   - presentation_from_complex: generators of the vertex stabilizers plus
//     the transport elements; relators are the vertex group relators plus,
//     for every transported edge end, the relator tau^-1 x tau w^-1 where x
//     generates the edge stabilizer and w is a word for tau^-1 x tau in the
//     end's vertex group.
//   - reidemeister_schreier_even_det: the index-2 subgroup of matrices whose
//     determinant is a square unit, i.e. PSL_2 inside PGL_2.  Schreier
//     generator matrices are rescaled by a unit to have determinant 1.
//   - parse_presentation_json: a presentation stored directly in a data file.

#include <map>
#include <string>
#include <vector>

#include "bianchi/ring.hpp"
#include "bianchi/polymod.hpp"

namespace bianchi {

using Word = std::vector<int>;

Word inverse_word(const Word& w);
Word concat_words(const Word& u, const Word& v);
Word word_from_string(const std::string& text, const std::vector<std::string>& gen_names);
std::string word_to_string(const Word& w, const std::vector<std::string>& gen_names);

struct GroupPresentation {
    int d = 1;
    GroupKind kind = GroupKind::PSL;
    std::string name;
    std::vector<std::string> gen_names;
    std::vector<Mat2> gens;
    std::vector<Word> relators;

    int ngens() const { return static_cast<int>(gens.size()); }
    Mat2 evaluate(const Word& w) const;
    // Relators must evaluate to a scalar: a unit multiple of the identity
    // for PGL, plus or minus the identity for PSL.  PSL generators must have
    // determinant exactly 1.
    void validate() const;
};

struct EdgeEnd {
    int vertex = 0;  // index into CellComplex::vertices
    Word transport;  // actual endpoint = transport * representative
};

struct VertexCell {
    std::string name;
    std::vector<int> stab_gens;   // indices into CellComplex::gens
    std::vector<Word> relators;   // words over the complex generators
    long order = 0;               // stabilizer order modulo scalars
};

struct EdgeCell {
    std::string name;
    EdgeEnd from;
    EdgeEnd to;
    std::vector<int> stab_gens;
    long order = 0;
};

struct FaceSide {
    int edge = 0;
    int sign = 1;    // +1 if traversed with the edge orientation
    Word transport;  // side traversed is transport * representative edge
};

struct CellComplex {
    int d = 1;
    GroupKind kind = GroupKind::PSL;
    std::string name;
    std::vector<std::string> gen_names;
    std::vector<Mat2> gens;
    std::vector<VertexCell> vertices;
    std::vector<EdgeCell> edges;
    std::vector<FaceSide> face;

    Mat2 evaluate(const Word& w) const;
};

// Canonical representative of M modulo scalar matrices: unit scalars for
// PGL, plus or minus one for PSL.  Used to compare group elements.
Mat2 scalar_canonical(const Mat2& m, GroupKind kind);

// Closure of a finite set of generators under multiplication, elements taken
// modulo scalars.  Words are shortest expressions in the generators and
// their inverses (breadth first).  Throws if the closure exceeds cap.
struct MatrixGroup {
    std::vector<Mat2> elements;
    std::vector<Word> words;  // letters refer to positions in gen_indices
    std::vector<int> gen_indices;
    GroupKind kind = GroupKind::PSL;

    long order() const { return static_cast<long>(elements.size()); }
    // Index of m modulo scalars, or -1 if absent.
    int find(const Mat2& m) const;

    std::map<std::vector<mpz_class>, int> index;
};

MatrixGroup enumerate_matrix_group(const std::vector<Mat2>& all_gens,
                                   const std::vector<int>& gen_indices,
                                   GroupKind kind, long cap = 20000);

// Word in the group's generator indices (global letters) expressing m modulo
// scalars; throws if m is not in the group.
Word find_word_in_group(const MatrixGroup& group, const Mat2& m);

// Order of the abstractly presented group <x_1..x_ngens | relators> by coset
// enumeration over the trivial subgroup.  Throws if the table exceeds cap,
// which for our use means the presentation failed to define a finite group.
long coset_enumeration_order(int ngens, const std::vector<Word>& relators, long cap = 200000);

// Full validation battery: generator determinants are units (exactly 1 for
// PSL), vertex relators evaluate to scalars, each vertex stabilizer's
// presented order equals its matrix closure order and the declared order,
// edge stabilizers land in both endpoint vertex groups after transport, and
// the differentials of the trivial-coefficient cochain complex compose to
// zero.  (The cohomology builder re-checks the composition for every
// module.)  Throws on any failure.
void validate_cellcomplex(const CellComplex& complex);

GroupPresentation presentation_from_complex(const CellComplex& complex);
GroupPresentation reidemeister_schreier_even_det(const GroupPresentation& pgl);

CellComplex parse_cellcomplex_json(const std::string& text);
GroupPresentation parse_presentation_json(const std::string& text);

// Data files compiled into the binary.  Names are the file names of the
// data/ directory, e.g. "pgl2_o1_complex.json".
const std::string& embedded_data_file(const std::string& name);
std::vector<std::string> embedded_data_names();

// The cell complexes available: PGL_2(O_d) for all five d, PSL_2(O_2).
CellComplex load_cellcomplex(int d, GroupKind kind);

// Presentations for PSL_2 and PGL_2 over all five rings.  PGL and PSL_2(O_2)
// come from their complexes; the other PSL groups are cut out of PGL by
// Reidemeister-Schreier on the determinant parity subgroup.
GroupPresentation load_presentation(int d, GroupKind kind);
GroupPresentation load_presentation_named(const std::string& data_name);

}  // namespace bianchi
