#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace covdep {

// Exact arithmetic backbone. Every analytic formula and the DP oracle are
// evaluated in Rational and rendered to double only at the output boundary.
using BigInt = mpz_class;
using Rational = mpq_class;

// den must be nonzero; result is canonical (lowest terms, positive denominator).
inline Rational make_rational(BigInt num, BigInt den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    Rational r(std::move(num), std::move(den));
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den) {
    return make_rational(BigInt(num), BigInt(den));
}

// Truncating conversion; error is below one ulp of the true value.
inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline std::string to_string(const BigInt& z) { return z.get_str(); }

}  // namespace covdep
