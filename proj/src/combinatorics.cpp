#include "covdep/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace covdep {

Rational harmonic(long n) {
    if (n < 0) throw std::domain_error("harmonic: n must be nonnegative");
    Rational acc(0);
    for (long i = 1; i <= n; ++i) acc += make_rational(1L, i);
    return acc;
}

Rational harmonic_diff(long n, long b) {
    if (n < 1) throw std::domain_error("harmonic_diff: n must be positive");
    if (b < 0 || b > n) throw std::domain_error("harmonic_diff: requires 0 <= b <= n");
    Rational acc(0);
    for (long i = 0; i < b; ++i) acc += make_rational(1L, n - i);
    return acc;
}

std::vector<Rational> harmonic_diff_table(long n, long limit) {
    if (n < 1) throw std::domain_error("harmonic_diff_table: n must be positive");
    if (limit < 0 || limit > n) throw std::domain_error("harmonic_diff_table: requires 0 <= limit <= n");
    std::vector<Rational> table(static_cast<size_t>(limit) + 1);
    table[0] = Rational(0);
    for (long b = 1; b <= limit; ++b) table[b] = table[b - 1] + make_rational(1L, n - b + 1);
    return table;
}

BigInt binomial(long n, long k) {
    if (n < 0) throw std::domain_error("binomial: n must be nonnegative");
    if (k < 0 || k > n) return BigInt(0);
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

namespace {

// log i! table grown on demand with compensated summation, so six-factor
// ratios stay well inside 1e-12 relative error.
std::vector<double> g_log_factorial{0.0};
double g_log_factorial_carry = 0.0;
std::mutex g_log_factorial_mutex;

double log_factorial(long n) {
    std::lock_guard<std::mutex> lock(g_log_factorial_mutex);
    while (g_log_factorial.size() <= static_cast<size_t>(n)) {
        double i = static_cast<double>(g_log_factorial.size());
        double term = std::log(i) - g_log_factorial_carry;
        double next = g_log_factorial.back() + term;
        g_log_factorial_carry = (next - g_log_factorial.back()) - term;
        g_log_factorial.push_back(next);
    }
    return g_log_factorial[static_cast<size_t>(n)];
}

}  // namespace

double log_binomial(long n, long k) {
    if (n < 0) throw std::domain_error("log_binomial: n must be nonnegative");
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

Rational hypergeometric_ratio(std::span<const BinomialArgs> numerator,
                              std::span<const BinomialArgs> denominator) {
    BigInt num(1);
    for (const auto& [n, k] : numerator) num *= binomial(n, k);
    BigInt den(1);
    for (const auto& [n, k] : denominator) {
        BigInt b = binomial(n, k);
        if (b == 0) throw std::domain_error("hypergeometric_ratio: vanishing denominator binomial");
        den *= b;
    }
    return make_rational(std::move(num), std::move(den));
}

double hypergeometric_ratio_approx(std::span<const BinomialArgs> numerator,
                                   std::span<const BinomialArgs> denominator) {
    double acc = 0.0;
    for (const auto& [n, k] : numerator) {
        double lb = log_binomial(n, k);
        if (std::isinf(lb)) return 0.0;
        acc += lb;
    }
    for (const auto& [n, k] : denominator) {
        double lb = log_binomial(n, k);
        if (std::isinf(lb)) throw std::domain_error("hypergeometric_ratio: vanishing denominator binomial");
        acc -= lb;
    }
    return std::exp(acc);
}

double hypergeometric_ratio_auto(std::span<const BinomialArgs> numerator,
                                 std::span<const BinomialArgs> denominator, long exact_limit) {
    long largest = 0;
    for (const auto& [n, k] : numerator) largest = std::max(largest, n);
    for (const auto& [n, k] : denominator) largest = std::max(largest, n);
    if (largest <= exact_limit) return to_double(hypergeometric_ratio(numerator, denominator));
    return hypergeometric_ratio_approx(numerator, denominator);
}

}  // namespace covdep
