#include "bianchi/factor.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "bianchi/ring.hpp"  // BIANCHI_CHECK

namespace bianchi {

namespace {

using Clock = std::chrono::steady_clock;

// Brent's variant of Pollard rho on n (odd, composite, not a perfect power).
// Iterates y <- y^2 + c, batching gcds m at a time.  Deterministic: the
// (y0, c) pairs are tried in a fixed order, so a given n always factors the
// same way.  Returns a proper factor of n, or 0 if the deadline passed.
mpz_class rho_brent(const mpz_class& n, Clock::time_point deadline) {
    for (unsigned long c = 1;; ++c) {
        mpz_class y = 2, x, ys, q = 1, g = 1, diff;
        unsigned long r = 1;
        const unsigned long m = 128;
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) {
                y = (y * y + c) % n;
            }
            for (unsigned long k = 0; k < r && g == 1; k += m) {
                ys = y;
                const unsigned long steps = std::min(m, r - k);
                for (unsigned long i = 0; i < steps; ++i) {
                    y = (y * y + c) % n;
                    diff = x - y;
                    q = (q * abs(diff)) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                if (Clock::now() > deadline) return 0;
            }
            r *= 2;
        }
        if (g == n) {
            // The batched gcd swallowed the factor; redo the last block one
            // step at a time.
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != n) return g;
        // Cycle degenerated for this c (x ran into its own tail); try the
        // next increment.
        if (Clock::now() > deadline) return 0;
    }
}

bool is_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// Splits n (>= 2) into primes, appending to `primes`; cofactors that resist
// rho before the deadline go to `leftovers`.  Perfect powers are peeled
// first so rho only ever sees n = a*b with a != b.
void split(mpz_class n, std::map<mpz_class, int>& primes,
           std::vector<mpz_class>& leftovers, int multiplicity,
           Clock::time_point deadline) {
    if (is_prime(n)) {
        primes[n] += multiplicity;
        return;
    }
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long e = 2;; ++e) {
            mpz_class root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
                split(root, primes, leftovers,
                      multiplicity * static_cast<int>(e), deadline);
                return;
            }
        }
    }
    mpz_class f = Clock::now() > deadline ? mpz_class(0)
                                          : rho_brent(n, deadline);
    if (f == 0) {
        for (int i = 0; i < multiplicity; ++i) leftovers.push_back(n);
        return;
    }
    split(f, primes, leftovers, multiplicity, deadline);
    split(n / f, primes, leftovers, multiplicity, deadline);
}

Factorization factor_to(const mpz_class& n, Clock::time_point deadline) {
    BIANCHI_CHECK(n != 0, "factor_integer: zero has no factorization");
    mpz_class m = abs(n);
    std::map<mpz_class, int> primes;
    std::vector<mpz_class> leftovers;

    // Trial division: 2, 3, then 6k +- 1 up to 10^5.  Clears everything the
    // torsion tables actually print and leaves rho a cofactor with no small
    // part, which is the regime it is good at.
    const unsigned long kTrialLimit = 100000;
    for (unsigned long p : {2ul, 3ul}) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            ++primes[mpz_class(p)];
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        }
    }
    for (unsigned long p = 5; p <= kTrialLimit; p += 6) {
        for (unsigned long q : {p, p + 2}) {
            while (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
                ++primes[mpz_class(q)];
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), q);
            }
        }
        if (m == 1) break;
    }
    if (m > 1) split(m, primes, leftovers, 1, deadline);

    Factorization out;
    for (const auto& [p, e] : primes) out.primes.emplace_back(p, e);
    std::sort(leftovers.begin(), leftovers.end());
    out.unfactored = std::move(leftovers);
    return out;
}

}  // namespace

Factorization factor_integer(const mpz_class& n, double budget_secs) {
    return factor_to(
        n, Clock::now() + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(budget_secs)));
}

TorsionReport torsion_primes_of(const std::vector<mpz_class>& values,
                                double budget_secs) {
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(budget_secs));
    std::map<mpz_class, int> primes;
    std::vector<mpz_class> composites;
    for (const mpz_class& v : values) {
        Factorization f = factor_to(v, deadline);
        for (const auto& [p, e] : f.primes) primes[p] += e;
        composites.insert(composites.end(), f.unfactored.begin(),
                          f.unfactored.end());
    }
    TorsionReport out;
    for (const auto& [p, e] : primes) out.primes.push_back(p);
    std::sort(composites.begin(), composites.end());
    composites.erase(std::unique(composites.begin(), composites.end()),
                     composites.end());
    out.unfactored = std::move(composites);
    return out;
}

int digit_count(const mpz_class& n) {
    // mpz_sizeinbase may overshoot by one for base 10; compare against the
    // power of ten to make the count exact.
    mpz_class m = abs(n);
    size_t k = mpz_sizeinbase(m.get_mpz_t(), 10);
    if (k > 1) {
        mpz_class pow10;
        mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(k - 1));
        if (m < pow10) --k;
    }
    return static_cast<int>(k);
}

}  // namespace bianchi
