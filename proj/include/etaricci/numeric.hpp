#pragma once

#include <gmpxx.h>

#include <string>

#include "etaricci/errors.hpp"

namespace etaricci {

using Int = mpz_class;
using Rat = mpq_class;

inline int sign(const Rat& q) { return sgn(q); }

/// q^e for any integer e; q must be nonzero when e < 0.
inline Rat rat_pow(const Rat& q, long e) {
    if (e == 0) return Rat(1);
    bool inv = e < 0;
    unsigned long n = inv ? static_cast<unsigned long>(-(e + 1)) + 1UL
                          : static_cast<unsigned long>(e);
    if (inv && q == 0) throw DomainError("zero raised to a negative power");
    Rat base = q, acc(1);
    while (n > 0) {
        if (n & 1UL) acc *= base;
        base *= base;
        n >>= 1;
    }
    if (inv) acc = Rat(1) / acc;
    return acc;
}

/// Canonical "p" / "p/q" rendering (q > 0, lowest terms).
inline std::string rat_str(const Rat& q) { return q.get_str(); }

} // namespace etaricci
