#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gmpxx.h>

#include "bianchi/factor.hpp"
#include "bianchi/ring.hpp"

using namespace bianchi;

namespace {

mpz_class recombine(const Factorization& f) {
    mpz_class prod = 1;
    for (const auto& [p, e] : f.primes)
        for (int i = 0; i < e; ++i) prod *= p;
    for (const mpz_class& c : f.unfactored) prod *= c;
    return prod;
}

}  // namespace

TEST_CASE("small and signed inputs factor by trial division") {
    Factorization f = factor_integer(mpz_class(2 * 2 * 3 * 5 * 41) * 271);
    REQUIRE(f.complete());
    REQUIRE(f.primes.size() == 5);
    CHECK(f.primes[0] == std::make_pair(mpz_class(2), 2));
    CHECK(f.primes[1] == std::make_pair(mpz_class(3), 1));
    CHECK(f.primes[2] == std::make_pair(mpz_class(5), 1));
    CHECK(f.primes[3] == std::make_pair(mpz_class(41), 1));
    CHECK(f.primes[4] == std::make_pair(mpz_class(271), 1));

    CHECK(factor_integer(mpz_class(1)).primes.empty());
    CHECK(factor_integer(mpz_class(-1)).primes.empty());
    Factorization neg = factor_integer(mpz_class(-12));
    CHECK(neg.primes == std::vector<std::pair<mpz_class, int>>{{2, 2}, {3, 1}});
    CHECK_THROWS_AS(factor_integer(mpz_class(0)), domain_error);
}

TEST_CASE("rho splits semiprimes past the trial range") {
    const mpz_class p = 1000003, q = 1000033;
    Factorization f = factor_integer(p * q, 30.0);
    REQUIRE(f.complete());
    REQUIRE(f.primes.size() == 2);
    CHECK(f.primes[0].first == p);
    CHECK(f.primes[1].first == q);
    CHECK(recombine(f) == p * q);

    // Deterministic: the same input factors identically on a second run.
    Factorization g = factor_integer(p * q, 30.0);
    CHECK(f.primes == g.primes);
    CHECK(f.unfactored == g.unfactored);
}

TEST_CASE("perfect powers are peeled before rho") {
    mpz_class n;
    mpz_ui_pow_ui(n.get_mpz_t(), 2, 64);
    Factorization f = factor_integer(n);
    REQUIRE(f.complete());
    CHECK(f.primes == std::vector<std::pair<mpz_class, int>>{{2, 64}});

    const mpz_class big = 1000003;
    f = factor_integer(big * big, 30.0);
    REQUIRE(f.complete());
    CHECK(f.primes == std::vector<std::pair<mpz_class, int>>{{big, 2}});
}

TEST_CASE("an exhausted budget reports the composite cofactor instead of stalling") {
    // 200-digit-scale semiprime: hopeless for rho, so a tiny budget must give
    // it back unfactored while still extracting the small part.
    mpz_class a("6513516734600035718300327211250928237178281758494417357560086828416863929270451437126021949850746381"),
        b("5846418214406154678836553182979162384198610505601062333417977898044957151338277007420297474541624423");
    mpz_class n = mpz_class(24) * a * b;
    Factorization f = factor_integer(n, 0.2);
    CHECK(!f.complete());
    CHECK(f.primes.size() == 2);  // 2^3 * 3
    CHECK(recombine(f) == n);
    for (const mpz_class& c : f.unfactored) CHECK(digit_count(c) >= 100);
}

TEST_CASE("torsion prime reports deduplicate across divisor values") {
    TorsionReport tr = torsion_primes_of({mpz_class(4), mpz_class(6),
                                          mpz_class(1), mpz_class(35)});
    CHECK(tr.primes == std::vector<mpz_class>{2, 3, 5, 7});
    CHECK(tr.unfactored.empty());
    CHECK_THROWS_AS(torsion_primes_of({mpz_class(0)}), domain_error);
}

TEST_CASE("digit counts are exact at powers of ten") {
    CHECK(digit_count(mpz_class(0)) == 1);
    CHECK(digit_count(mpz_class(9)) == 1);
    CHECK(digit_count(mpz_class(10)) == 2);
    CHECK(digit_count(mpz_class(999)) == 3);
    CHECK(digit_count(mpz_class(1000)) == 4);
    CHECK(digit_count(mpz_class(-1000)) == 4);
    mpz_class big;
    mpz_ui_pow_ui(big.get_mpz_t(), 10, 99);
    CHECK(digit_count(big - 1) == 99);
    CHECK(digit_count(big) == 100);
}
