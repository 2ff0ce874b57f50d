#pragma once

#include <span>
#include <utility>
#include <vector>

#include "covdep/rational.hpp"

namespace covdep {

// H_n = sum_{i=1..n} 1/i, exactly. harmonic(0) == 0.
Rational harmonic(long n);

// H_n - H_{n-b} = sum_{i=0..b-1} 1/(n-i), computed as a partial sum so a
// float rendering never subtracts two large harmonics. Requires 0 <= b <= n.
Rational harmonic_diff(long n, long b);

// C(n, k) for n >= 0; returns 0 when k < 0 or k > n. The analytic sums rely
// on this vanishing convention to silence out-of-range terms.
BigInt binomial(long n, long k);

// ln C(n, k); -inf when the coefficient vanishes. Requires n >= 0.
double log_binomial(long n, long k);

using BinomialArgs = std::pair<long, long>;

// Exact product of numerator binomials over the product of denominator
// binomials. Empty lists give 1. A vanishing denominator binomial is a
// domain error; vanishing numerators make the ratio 0.
Rational hypergeometric_ratio(std::span<const BinomialArgs> numerator,
                              std::span<const BinomialArgs> denominator);

// Log-domain rendering of the same ratio for parameters past exact-arithmetic
// comfort. Agrees with the exact path to ~1e-14 relative over n <= 200.
double hypergeometric_ratio_approx(std::span<const BinomialArgs> numerator,
                                   std::span<const BinomialArgs> denominator);

// Largest parameter for which callers should prefer the exact path by
// default; sweeps beyond this switch to hypergeometric_ratio_approx.
inline constexpr long kExactPathDefaultLimit = 500;

// Exact path while every binomial parameter stays within exact_limit,
// log-domain past it.
double hypergeometric_ratio_auto(std::span<const BinomialArgs> numerator,
                                 std::span<const BinomialArgs> denominator,
                                 long exact_limit = kExactPathDefaultLimit);

// Prefix table hd[b] = H_n - H_{n-b} for b = 0..limit. Shared helper for the
// analytic formulas, which consume many harmonic differences with a fixed n.
std::vector<Rational> harmonic_diff_table(long n, long limit);

}  // namespace covdep
