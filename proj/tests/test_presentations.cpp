#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "bianchi/exactla.hpp"
#include "bianchi/presentations.hpp"
#include "bianchi/ring.hpp"

using namespace bianchi;

namespace {

const int ALL_D[] = {1, 2, 3, 7, 11};

// Abelianization of a presented group as cokernel of the relator exponent
// matrix; an oracle for the data files since the target values are classical.
AbelianDecomposition<mpz_class> abelianization(const GroupPresentation& p) {
    Mat<mpz_class> Z = Mat<mpz_class>::identity(p.ngens(), mpz_class(0));
    Mat<mpz_class> B((long)p.relators.size(), p.ngens(), mpz_class(0));
    for (size_t r = 0; r < p.relators.size(); ++r)
        for (int letter : p.relators[r]) {
            int idx = std::abs(letter) - 1;
            B.at((long)r, idx) += (letter > 0) ? 1 : -1;
        }
    return quotient_decomposition(Z, B);
}

Mat2 eval_global_word(const std::vector<Mat2>& gens, const Word& w, int d) {
    Mat2 m = Mat2::identity(d);
    for (int letter : w) {
        const Mat2& g = gens[std::abs(letter) - 1];
        m = m * (letter > 0 ? g : mat2_inverse(g));
    }
    return m;
}

Word rel(const std::string& text, const std::vector<std::string>& names) {
    return word_from_string(text, names);
}

}  // namespace

TEST_CASE("word utilities") {
    std::vector<std::string> names{"a", "b", "g"};
    Word w = word_from_string("GbgAB", names);
    CHECK(w == Word{-3, 2, 3, -1, -2});
    CHECK(word_to_string(w, names) == "GbgAB");
    CHECK(word_from_string("", names).empty());
    Word u = word_from_string("ab", names);
    CHECK(inverse_word(u) == Word{-2, -1});
    CHECK(concat_words(u, inverse_word(u)) == Word{1, 2, -2, -1});
    CHECK_THROWS_AS(word_from_string("z", names), domain_error);
}

TEST_CASE("coset enumeration reproduces classical group orders") {
    std::vector<std::string> xy{"x", "y"};
    auto order = [&](int n, std::vector<std::string> rel_texts) {
        std::vector<Word> rels;
        for (const auto& t : rel_texts) rels.push_back(rel(t, xy));
        return coset_enumeration_order(n, rels);
    };
    CHECK(order(1, {"xxxxx"}) == 5);                  // Z/5
    CHECK(order(1, {"x"}) == 1);                      // trivial
    CHECK(order(2, {"xx", "yy", "xyxy"}) == 4);       // Z/2 x Z/2
    CHECK(order(2, {"xx", "yyy", "xyxy"}) == 6);      // S_3
    CHECK(order(2, {"xx", "yyyy", "xyxy"}) == 8);     // D_4
    CHECK(order(2, {"xxx", "yy", "xyxyxy"}) == 12);   // A_4
    CHECK(order(2, {"xxx", "yy", "xyxyxyxy"}) == 24); // S_4
    CHECK(order(2, {"xxx", "yyy", "xyxy"}) == 12);    // A_4, second shape
    CHECK(order(2, {"xxxx", "xxYY", "Yxyx"}) == 8);   // quaternion Q_8
    CHECK(order(2, {"xx", "yyy", "xyxyxyxyxy"}) == 60);  // A_5
    // infinite groups must hit the cap, not loop forever
    CHECK_THROWS_AS(coset_enumeration_order(1, {}, 500), domain_error);
    CHECK_THROWS_AS(coset_enumeration_order(2, {rel("xyXY", xy)}, 500), domain_error);
}

TEST_CASE("matrix group closure modulo scalars") {
    // <a, b> with a = (0 i; i 0), b = (1 -1; 1 0) is S_3 inside PGL_2(O_1)
    int d = 1;
    Mat2 a(QuadInt(0, 0, d), QuadInt(0, 1, d), QuadInt(0, 1, d), QuadInt(0, 0, d));
    Mat2 b(QuadInt(1, 0, d), QuadInt(-1, 0, d), QuadInt(1, 0, d), QuadInt(0, 0, d));
    Mat2 junk = Mat2::identity(d);
    std::vector<Mat2> pool{a, junk, b};
    MatrixGroup g = enumerate_matrix_group(pool, {0, 2}, GroupKind::PGL);
    CHECK(g.order() == 6);

    // find is scalar-blind and words are faithful
    for (int i = 0; i < g.order(); ++i) {
        const Mat2& m = g.elements[i];
        for (const QuadInt& u : units(d)) {
            Mat2 um(u * m.m00, u * m.m01, u * m.m10, u * m.m11);
            CHECK(g.find(um) == i);
        }
        Word w = find_word_in_group(g, m);
        Mat2 back = eval_global_word(pool, w, d);
        CHECK(mat2_proportional(back, m));
    }
    Mat2 outside(QuadInt(1, 0, d), QuadInt(1, 0, d), QuadInt(0, 0, d), QuadInt(1, 0, d));
    CHECK(g.find(outside) == -1);
    CHECK_THROWS_AS(find_word_in_group(g, outside), domain_error);
    // a parabolic generates an infinite group: the cap must fire
    CHECK_THROWS_AS(enumerate_matrix_group({outside}, {0}, GroupKind::PSL, 100),
                    domain_error);
}

TEST_CASE("scalar_canonical identifies exactly the unit multiples") {
    for (int d : ALL_D) {
        Mat2 m(QuadInt(1, 2, d), QuadInt(0, 1, d), QuadInt(3, 0, d), QuadInt(1, 1, d));
        for (const QuadInt& u : units(d)) {
            Mat2 um(u * m.m00, u * m.m01, u * m.m10, u * m.m11);
            CHECK(scalar_canonical(um, GroupKind::PGL) == scalar_canonical(m, GroupKind::PGL));
        }
        Mat2 nm(-m.m00, -m.m01, -m.m10, -m.m11);
        CHECK(scalar_canonical(nm, GroupKind::PSL) == scalar_canonical(m, GroupKind::PSL));
        if (units(d).size() > 2) {
            // a genuinely complex unit must NOT be identified in PSL
            QuadInt u = units(d)[1] == QuadInt(-1, 0, d) ? units(d)[2] : units(d)[1];
            Mat2 um(u * m.m00, u * m.m01, u * m.m10, u * m.m11);
            CHECK(scalar_canonical(um, GroupKind::PSL) != scalar_canonical(m, GroupKind::PSL));
        }
    }
}

TEST_CASE("all stored cell complexes load and validate") {
    for (int d : ALL_D) {
        CellComplex c = load_cellcomplex(d, GroupKind::PGL);
        CHECK(c.d == d);
        CHECK(c.kind == GroupKind::PGL);
        validate_cellcomplex(c);  // parse already ran this; must stay true
        CHECK(!c.face.empty());
    }
    CellComplex c2 = load_cellcomplex(2, GroupKind::PSL);
    CHECK(c2.kind == GroupKind::PSL);
    CHECK(c2.vertices.size() == 2);
    CHECK(c2.edges.size() == 3);
    CHECK(c2.face.size() == 4);

    // declared stabilizer orders, fixed facts about these quotients
    auto orders = [](const CellComplex& c) {
        std::vector<long> v;
        for (const auto& vc : c.vertices) v.push_back(vc.order);
        return v;
    };
    CHECK(orders(load_cellcomplex(1, GroupKind::PGL)) == std::vector<long>{8, 6, 24});
    CHECK(orders(c2) == std::vector<long>{4, 12});
    CHECK(orders(load_cellcomplex(2, GroupKind::PGL)) == std::vector<long>{4, 6, 24, 8});
    CHECK(orders(load_cellcomplex(3, GroupKind::PGL)) == std::vector<long>{12, 6, 12});
    CHECK(orders(load_cellcomplex(7, GroupKind::PGL)) == std::vector<long>{4, 6, 6, 4});
    CHECK(orders(load_cellcomplex(11, GroupKind::PGL)) == std::vector<long>{4, 6, 12, 6});

    CHECK_THROWS_AS(load_cellcomplex(1, GroupKind::PSL), domain_error);
}

TEST_CASE("three independent routes to PSL_2(O_2) agree on the abelianization") {
    // Classical value: Z + Z/6.
    auto check_ab = [](const GroupPresentation& p) {
        AbelianDecomposition<mpz_class> ab = abelianization(p);
        CHECK(ab.rank == 1);
        REQUIRE(ab.divisors.size() == 1);
        CHECK(ab.divisors[0] == 6);
    };
    GroupPresentation from_complex = presentation_from_complex(load_cellcomplex(2, GroupKind::PSL));
    check_ab(from_complex);
    GroupPresentation stored = load_presentation_named("psl2_o2_translation_presentation.json");
    check_ab(stored);
    GroupPresentation rs = reidemeister_schreier_even_det(load_presentation(2, GroupKind::PGL));
    check_ab(rs);
}

TEST_CASE("PSL presentations: determinant one and classical first Betti numbers") {
    const long expected_rank[] = {0, 1, 0, 1, 1};  // d = 1, 2, 3, 7, 11
    for (size_t i = 0; i < 5; ++i) {
        int d = ALL_D[i];
        GroupPresentation p = load_presentation(d, GroupKind::PSL);
        p.validate();
        CHECK(p.kind == GroupKind::PSL);
        for (const Mat2& g : p.gens) CHECK(g.det() == QuadInt(1, 0, d));
        CHECK(abelianization(p).rank == expected_rank[i]);
    }
}

TEST_CASE("PGL presentations validate and their PSL index-2 subgroups exist") {
    for (int d : ALL_D) {
        GroupPresentation p = load_presentation(d, GroupKind::PGL);
        p.validate();
        CHECK(p.kind == GroupKind::PGL);
        // at least one generator has non-square determinant, else the
        // determinant parity subgroup would be everything
        bool has_odd = false;
        for (const Mat2& g : p.gens) {
            QuadInt dd = g.det();
            bool square = false;
            for (const QuadInt& u : units(d))
                if (u * u == dd) square = true;
            if (!square) has_odd = true;
        }
        CHECK(has_odd);
        GroupPresentation rs = reidemeister_schreier_even_det(p);
        rs.validate();
        CHECK(rs.kind == GroupKind::PSL);
        // Schreier rewriting doubles generator count minus the tree edge
        CHECK(rs.ngens() == 2 * p.ngens() - 1);
    }
}

TEST_CASE("presentation evaluate and embedded data registry") {
    GroupPresentation p = load_presentation(2, GroupKind::PSL);
    Word w = word_from_string("aA", p.gen_names);
    CHECK(p.evaluate(w) == Mat2::identity(2));
    for (const Word& r : p.relators) CHECK(mat2_is_scalar(p.evaluate(r)));

    std::vector<std::string> names = embedded_data_names();
    CHECK(names.size() >= 7);
    CHECK(std::find(names.begin(), names.end(), "pgl2_o1_complex.json") != names.end());
    CHECK_THROWS_AS(embedded_data_file("no_such_file.json"), domain_error);
}
