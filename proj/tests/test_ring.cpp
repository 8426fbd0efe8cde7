#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "bianchi/ring.hpp"

using namespace bianchi;

namespace {

const int ALL_D[] = {1, 2, 3, 7, 11};

QuadInt random_quadint(std::mt19937_64& rng, int d, long span) {
    std::uniform_int_distribution<long> dist(-span, span);
    return QuadInt(dist(rng), dist(rng), d);
}

}  // namespace

TEST_CASE("omega satisfies its minimal polynomial") {
    for (int d : ALL_D) {
        QuadInt w = omega(d);
        if (half_basis(d)) {
            CHECK(w * w == w - QuadInt(half_q(d), 0, d));
        } else {
            CHECK(w * w == QuadInt(-d, 0, d));
        }
        CHECK(norm(w) == (half_basis(d) ? half_q(d) : d));
        CHECK(trace(w) == (half_basis(d) ? 1 : 0));
    }
}

TEST_CASE("norm is multiplicative and matches conjugate product") {
    std::mt19937_64 rng(12345);
    for (int d : ALL_D) {
        for (int iter = 0; iter < 200; ++iter) {
            QuadInt x = random_quadint(rng, d, 50);
            QuadInt y = random_quadint(rng, d, 50);
            CHECK(norm(x * y) == norm(x) * norm(y));
            QuadInt xc = x * conj(x);
            CHECK(xc.a == norm(x));
            CHECK(xc.b == 0);
            CHECK(trace(x) == (x + conj(x)).a);
        }
    }
}

TEST_CASE("unit groups have the right size and norms") {
    CHECK(units(1).size() == 4);
    CHECK(units(3).size() == 6);
    for (int d : {2, 7, 11}) CHECK(units(d).size() == 2);
    for (int d : ALL_D) {
        for (const QuadInt& u : units(d)) {
            CHECK(norm(u) == 1);
            CHECK(is_unit(u));
            // inverse of a unit is its conjugate
            CHECK(u * conj(u) == QuadInt(1, 0, d));
        }
        CHECK(units(d)[0] == QuadInt(1, 0, d));
    }
}

TEST_CASE("euclidean division: exhaustive small box") {
    for (int d : ALL_D) {
        for (long xa = -4; xa <= 4; ++xa)
            for (long xb = -4; xb <= 4; ++xb)
                for (long ya = -3; ya <= 3; ++ya)
                    for (long yb = -3; yb <= 3; ++yb) {
                        QuadInt x(xa, xb, d), y(ya, yb, d);
                        if (y.is_zero()) continue;
                        DivResult qr = euclid_div(x, y);
                        CHECK(qr.q * y + qr.r == x);
                        CHECK(norm(qr.r) < norm(y));
                    }
    }
}

TEST_CASE("euclidean division: random large pairs, d = 11 is the tight case") {
    std::mt19937_64 rng(777);
    for (int d : ALL_D) {
        const int iters = (d == 11) ? 10000 : 2000;
        for (int iter = 0; iter < iters; ++iter) {
            QuadInt x = random_quadint(rng, d, 1000000);
            QuadInt y = random_quadint(rng, d, 1000);
            if (y.is_zero()) continue;
            DivResult qr = euclid_div(x, y);
            CHECK(qr.q * y + qr.r == x);
            CHECK(norm(qr.r) < norm(y));
            // determinism
            DivResult again = euclid_div(x, y);
            CHECK(again.q == qr.q);
            CHECK(again.r == qr.r);
        }
    }
}

TEST_CASE("divides / exact_div round trip") {
    std::mt19937_64 rng(31337);
    for (int d : ALL_D) {
        for (int iter = 0; iter < 300; ++iter) {
            QuadInt y = random_quadint(rng, d, 40);
            if (y.is_zero()) continue;
            QuadInt q = random_quadint(rng, d, 40);
            QuadInt x = q * y;
            CHECK(divides(y, x));
            CHECK(exact_div(x, y) == q);
            QuadInt r = random_quadint(rng, d, 3);
            if (!r.is_zero() && norm(r) < norm(y)) CHECK(!divides(y, x + r));
        }
    }
}

TEST_CASE("canonical associate: unit-invariant, admissible, idempotent") {
    std::mt19937_64 rng(99);
    for (int d : ALL_D) {
        for (int iter = 0; iter < 300; ++iter) {
            QuadInt x = random_quadint(rng, d, 60);
            CanonicalResult cr = canonical_associate(x);
            CHECK(cr.unit * x == cr.value);
            CHECK(is_unit(cr.unit));
            for (const QuadInt& u : units(d)) CHECK(canonical(u * x) == cr.value);
            CHECK(canonical(cr.value) == cr.value);
            if (!x.is_zero()) {
                bool admissible = cr.value.a > 0 || (cr.value.a == 0 && cr.value.b > 0);
                CHECK(admissible);
            }
        }
    }
    CHECK(canonical(QuadInt(0, 0, 1)).is_zero());
}

TEST_CASE("gcd divides both arguments and is attained by the bezout pair") {
    std::mt19937_64 rng(4242);
    for (int d : ALL_D) {
        for (int iter = 0; iter < 200; ++iter) {
            QuadInt x = random_quadint(rng, d, 80);
            QuadInt y = random_quadint(rng, d, 80);
            QuadInt g = quad_gcd(x, y);
            if (x.is_zero() && y.is_zero()) {
                CHECK(g.is_zero());
                continue;
            }
            CHECK(divides(g, x));
            CHECK(divides(g, y));
            CHECK(g == canonical(g));
            ExtGcd e = quad_ext_gcd(x, y);
            CHECK(e.g == g);
            CHECK(e.u * x + e.v * y == g);
            // common divisors divide the gcd: scale a joint multiple
            QuadInt m = random_quadint(rng, d, 5);
            if (!m.is_zero()) CHECK(quad_gcd(m * x, m * y) == canonical(m * g));
        }
    }
}

namespace {

// Independent splitting oracle: p has an element of norm p in O_d iff p is
// not inert, by brute force over the (finitely many) coefficient pairs with
// norm exactly p.
bool norm_form_represents(int d, long p) {
    for (long a = -p; a <= p; ++a) {
        for (long b = -p; b <= p; ++b) {
            QuadInt x(a, b, d);
            if (norm(x) == p) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("split_type against the norm-form oracle") {
    const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    for (int d : ALL_D) {
        for (long p : primes) {
            SplitInfo info = split_type(d, p);
            const bool ramified = (mpz_class(-discriminant(d)) % p == 0);
            if (ramified) {
                CHECK(info.kind == SplitKind::ramified);
            } else if (norm_form_represents(d, p)) {
                CHECK(info.kind == SplitKind::split);
            } else {
                CHECK(info.kind == SplitKind::inert);
            }
            if (info.kind != SplitKind::inert) {
                CHECK(norm(info.pi) == p);
                // pi divides w - t, so w = t in the residue field
                CHECK(divides(info.pi, omega(d) - QuadInt(info.t, 0, d)));
                if (info.kind == SplitKind::split) {
                    // the conjugate prime is genuinely different
                    CHECK(!divides(info.pi, conj(info.pi)));
                } else {
                    CHECK(divides(info.pi, conj(info.pi)));
                }
            }
        }
    }
}

TEST_CASE("mat2 inverse and determinant") {
    std::mt19937_64 rng(5150);
    for (int d : ALL_D) {
        for (const QuadInt& u : units(d)) {
            // build unit-determinant matrices from elementary ones
            Mat2 m = Mat2::identity(d);
            for (int step = 0; step < 6; ++step) {
                QuadInt x = random_quadint(rng, d, 4);
                Mat2 e = (step % 2 == 0) ? Mat2(QuadInt(1, 0, d), x, QuadInt(0, 0, d), QuadInt(1, 0, d))
                                         : Mat2(QuadInt(1, 0, d), QuadInt(0, 0, d), x, QuadInt(1, 0, d));
                m = m * e;
            }
            m = m * Mat2(u, QuadInt(0, 0, d), QuadInt(0, 0, d), QuadInt(1, 0, d));
            CHECK(m.det() == u);
            Mat2 inv = mat2_inverse(m);
            CHECK(m * inv == Mat2::identity(d));
            CHECK(inv * m == Mat2::identity(d));
        }
    }
}

TEST_CASE("quadint json round trip") {
    std::mt19937_64 rng(2024);
    for (int d : ALL_D) {
        for (int iter = 0; iter < 50; ++iter) {
            QuadInt x = random_quadint(rng, d, 1000000000L);
            CHECK(quadint_from_json(quadint_to_json(x), d) == x);
        }
    }
}
