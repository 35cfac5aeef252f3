#pragma once
// Exact rational scalars. GMP's mpq_class does the heavy lifting; we only
// add a couple of constructors/helpers used all over the term algebra.

#include <gmpxx.h>
#include <cstdint>
#include <string>
#include <stdexcept>

namespace jetalg {

using Rat = mpq_class;

// mpq_class(n,d) does not canonicalize on its own.
inline Rat rat(long n, long d = 1) {
    if (d == 0) throw std::invalid_argument("rat: zero denominator");
    Rat q(n, d);
    q.canonicalize();
    return q;
}

inline Rat rat_pow(const Rat& b, unsigned e) {
    Rat r(1);
    Rat acc = b;
    for (unsigned k = e; k; k >>= 1) {
        if (k & 1) r *= acc;
        if (k > 1) acc *= acc;
    }
    return r;
}

inline Rat factorial(unsigned n) {
    mpz_class z;
    mpz_fac_ui(z.get_mpz_t(), n);
    return Rat(z);
}

inline Rat binomial(unsigned n, unsigned k) {
    if (k > n) return Rat(0);
    mpz_class z;
    mpz_bin_uiui(z.get_mpz_t(), n, k);
    return Rat(z);
}

// "3", "-1/24" — always reduced, no decimals anywhere in this codebase.
inline std::string rat_str(const Rat& q) { return q.get_str(); }

} // namespace jetalg
