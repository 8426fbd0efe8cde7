#pragma once

// Integer factorization with a time budget.
//
// Invariant-factor values coming out of the Smith form are exact however
// large they get, but turning them into torsion prime lists needs actual
// factoring, and past fifty digits or so that can be hopeless.  The policy
// is: factor what fits in the budget, and hand anything that resists back to
// the caller as an explicit composite cofactor so reports can say "a
// 73-digit unfactored composite" instead of stalling or lying.
//
// The machinery is standard: trial division by small primes, then Brent's
// cycle-finding variant of Pollard rho with deterministic parameters (so
// repeated runs factor the same input the same way), with Miller-Rabin
// (mpz_probab_prime_p) deciding when to stop splitting.  Perfect powers are
// peeled with mpz_perfect_power_p before rho since rho is blind to them.

#include <gmpxx.h>

#include <vector>

namespace bianchi {

struct Factorization {
    // (prime, exponent) pairs, primes strictly ascending.
    std::vector<std::pair<mpz_class, int>> primes;
    // Composite cofactors the budget did not crack, ascending, with
    // multiplicity.  Product of all primes^exponents times all unfactored
    // entries equals |n|.
    std::vector<mpz_class> unfactored;

    bool complete() const { return unfactored.empty(); }
};

// Factor |n| within roughly budget_secs of wall time.  n = 0 is rejected;
// |n| = 1 yields an empty factorization.  The budget only limits the rho
// stage; trial division and primality tests always run to completion.
Factorization factor_integer(const mpz_class& n, double budget_secs = 5.0);

// Distinct primes dividing any of the values (ascending), plus the distinct
// composite cofactors that survived the budget.  Zero values are rejected,
// unit values contribute nothing.  The budget is shared across the list.
struct TorsionReport {
    std::vector<mpz_class> primes;
    std::vector<mpz_class> unfactored;
};

TorsionReport torsion_primes_of(const std::vector<mpz_class>& values,
                                double budget_secs = 5.0);

// Number of decimal digits of |n|, for reporting unfactored composites.
int digit_count(const mpz_class& n);

}  // namespace bianchi
