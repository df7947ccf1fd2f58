#pragma once

#include <gmpxx.h>

#include <string>

namespace qhforge {

// All coefficients in the workbench are exact rationals; no floating point
// enters any computation.
using Int = mpz_class;
using Rat = mpq_class;

// mpq_class does not canonicalize two-argument constructions on its own.
inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// Renders "7", "-7" or "2/3"; never a decimal.
std::string rat_str(const Rat& r);

// Accepts "7", "-7", "2/3"; throws std::invalid_argument on anything else.
Rat parse_rat(const std::string& s);

Int binomial(unsigned long n, unsigned long k);
Int factorial(unsigned long n);

}  // namespace qhforge
