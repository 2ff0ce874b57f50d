#include "covdep/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covdep/combinatorics.hpp"

namespace covdep {

namespace {

void require_single_file(const SystemParams& params) {
    if (params.a != 1) throw std::invalid_argument("single-file form requires a=1");
}

// Var(T(b)) = sum_{i<b} pool*i/(pool-i)^2: the wait between the i-th and
// (i+1)-st distinct strand is Geometric((pool-i)/pool) and the waits are
// independent of which strands arrive.
std::vector<Rational> wait_variance_table(long pool, long limit) {
    std::vector<Rational> table(static_cast<size_t>(limit) + 1);
    table[0] = Rational(0);
    for (long b = 1; b <= limit; ++b) {
        long i = b - 1;
        table[b] = table[b - 1] + make_rational(BigInt(pool) * i, BigInt(pool - i) * (pool - i));
    }
    return table;
}

AbsorptionMixture global_mixture(const SystemParams& params) {
    const long mn = params.pool(), mk = params.m * params.k, ak = params.a * params.k;
    AbsorptionMixture mix;
    const BigInt denom = binomial(mn, ak);
    Rational route_one(0);
    for (long j = 0; j <= mk - ak - 1; ++j) {
        Rational w = make_rational(binomial(ak - 1 + j, ak - 1), denom);
        route_one += w;
        mix.emplace_back(std::move(w), ak + j);
    }
    mix.emplace_back(Rational(1) - route_one, mk);
    return mix;
}

// The six absorption families of the PMDS chain, each entry the probability
// of ending there times the total strands collected when it happens.
AbsorptionMixture pmds_mixture(const SystemParams& params, long slack) {
    const long n = params.n, k = params.k, s = slack;
    const long nn = 2 * n;
    AbsorptionMixture mix;
    auto push = [&](const BigInt& count, long pred_total, long numer, long b) {
        if (numer <= 0 || count == 0) return;
        Rational w = make_rational(count * numer, binomial(nn, pred_total) * (nn - pred_total));
        mix.emplace_back(std::move(w), b);
    };
    // all k systematic strands of the requested row
    for (long j = 0; j <= s; ++j)
        for (long h = 0; h <= k - j; ++h)
            push(k * binomial(n - k, j) * binomial(n, h), k - 1 + j + h, 1, k + j + h);
    // k+s strands of the requested row, last one systematic / non-systematic
    for (long i = 1; i <= k - 1; ++i)
        for (long h = 0; h <= k - s; ++h)
            push(binomial(k, i - 1) * binomial(n - k, k + s - i) * binomial(n, h),
                 k + s - 1 + h, k - i + 1, k + s + h);
    for (long i = 0; i <= k - 1; ++i)
        for (long h = 0; h <= k - s; ++h)
            push(binomial(k, i) * binomial(n - k, k + s - i - 1) * binomial(n, h),
                 k + s - 1 + h, n - 2 * k - s + i + 1, k + s + h);
    // k-s strands of the requested row after the other row passed k+s
    for (long i = 1; i <= k - s; ++i)
        for (long h = k + s + 1; h <= n; ++h)
            push(binomial(k, i - 1) * binomial(n - k, k - s - i) * binomial(n, h),
                 k - s - 1 + h, k - i + 1, k - s + h);
    for (long i = 0; i <= k - s; ++i)
        for (long h = k + s + 1; h <= n; ++h)
            push(binomial(k, i) * binomial(n - k, k - s - i - 1) * binomial(n, h),
                 k - s - 1 + h, n - 2 * k + s + i + 1, k - s + h);
    // exactly 2k strands overall with the requested row inside [k-s, k+s)
    const BigInt full = binomial(nn, 2 * k);
    for (long i = 0; i <= k - 1; ++i)
        for (long j = std::max(0L, k - s - i); j <= k + s - i - 1; ++j) {
            BigInt count = binomial(k, i) * binomial(n - k, j) * binomial(n, 2 * k - (i + j));
            if (count == 0) continue;
            mix.emplace_back(make_rational(std::move(count), full), 2 * k);
        }
    return mix;
}

// Bucketed weights of the local-scheme absorption family: bucket[g] is the
// integer strand-choice count summed over last-transient states with total g.
std::vector<BigInt> local_family_buckets(const SystemParams& params, long long budget) {
    const long n = params.n, k = params.k, a = params.a;
    const long rest_cap = (params.m - params.a) * params.n;
    const long mn = params.pool();

    long long family = 0;
    {
        long long per_j = 1;
        for (long i = 0; i < a - 1; ++i) {
            per_j *= n - k + 1;
            if (per_j > budget) throw StateBudgetError(per_j, budget);
        }
        family = static_cast<long long>(a) * per_j * (rest_cap + 1);
        if (family > budget) throw StateBudgetError(family, budget);
    }

    std::vector<BigInt> row_n(static_cast<size_t>(n) + 1);
    for (long v = 0; v <= n; ++v) row_n[v] = binomial(n, v);
    std::vector<BigInt> row_rest(static_cast<size_t>(rest_cap) + 1);
    for (long v = 0; v <= rest_cap; ++v) row_rest[v] = binomial(rest_cap, v);

    std::vector<BigInt> bucket(static_cast<size_t>(mn), BigInt(0));
    std::vector<long> counts(static_cast<size_t>(a) + 1);
    for (long j = 0; j < a; ++j) {
        // coordinate j is pinned at k-1; odometer over the other requested
        // coordinates in [k..n] and the pooled remainder in [0..rest_cap]
        std::vector<long> free_pos;
        for (long i = 0; i <= a; ++i)
            if (i != j) free_pos.push_back(i);
        auto low = [&](long pos) { return pos == a ? 0L : k; };
        auto high = [&](long pos) { return pos == a ? rest_cap : n; };
        counts[static_cast<size_t>(j)] = k - 1;
        for (long pos : free_pos) counts[static_cast<size_t>(pos)] = low(pos);
        for (;;) {
            long total = 0;
            BigInt w(1);
            for (long i = 0; i < a; ++i) {
                total += counts[static_cast<size_t>(i)];
                w *= row_n[static_cast<size_t>(counts[static_cast<size_t>(i)])];
            }
            total += counts[static_cast<size_t>(a)];
            w *= row_rest[static_cast<size_t>(counts[static_cast<size_t>(a)])];
            bucket[static_cast<size_t>(total)] += w;

            size_t c = free_pos.size();
            while (c > 0 && counts[static_cast<size_t>(free_pos[c - 1])] == high(free_pos[c - 1])) --c;
            if (c == 0) break;
            ++counts[static_cast<size_t>(free_pos[c - 1])];
            for (size_t r = c; r < free_pos.size(); ++r)
                counts[static_cast<size_t>(free_pos[r])] = low(free_pos[r]);
        }
    }
    return bucket;
}

AbsorptionMixture local_mixture(const SystemParams& params, long long budget) {
    const long mn = params.pool(), n = params.n, k = params.k;
    auto bucket = local_family_buckets(params, budget);
    AbsorptionMixture mix;
    for (long g = 0; g < mn; ++g) {
        if (bucket[static_cast<size_t>(g)] == 0) continue;
        Rational w = make_rational(bucket[static_cast<size_t>(g)] * (n - k + 1),
                                   binomial(mn, g) * (mn - g));
        mix.emplace_back(std::move(w), g + 1);
    }
    return mix;
}

Rational mixture_mean(const AbsorptionMixture& mix, long pool) {
    long max_b = 0;
    for (const auto& [w, b] : mix) max_b = std::max(max_b, b);
    auto hd = harmonic_diff_table(pool, max_b);
    Rational acc(0);
    for (const auto& [w, b] : mix) acc += w * pool * hd[static_cast<size_t>(b)];
    return acc;
}

}  // namespace

Rational expected_local_single(const SystemParams& params) {
    validate(Scheme::local_mds(), params);
    require_single_file(params);
    return params.pool() * harmonic_diff(params.n, params.k);
}

Rational expected_global_multi(const SystemParams& params) {
    validate(Scheme::global_mds(), params);
    const long mn = params.pool(), mk = params.m * params.k, ak = params.a * params.k;
    Rational value = mn * harmonic_diff(mn, mk);
    // correction sum, with each harmonic difference kept as a partial sum;
    // the binomial column sums against H_{mn-mk} telescope by the Pascal
    // identity sum_j C(ak-1+j, ak-1) = C(mk-1, ak)
    Rational tail(0);  // H_{mn-(ak+j)} - H_{mn-mk}, built from j = mk-ak-1 down
    Rational corr(0);
    for (long j = mk - ak - 1; j >= 0; --j) {
        tail += make_rational(1L, mn - (ak + j));
        corr += binomial(ak - 1 + j, ak - 1) * tail;
    }
    if (corr != 0) value -= make_rational(BigInt(mn), binomial(mn, ak)) * corr;
    return value;
}

Rational expected_global_single(const SystemParams& params) {
    require_single_file(params);
    return expected_global_multi(params);
}

Rational expected_pmds_single(const SystemParams& params, long slack) {
    validate(Scheme::pmds(slack), params);
    return mixture_mean(pmds_mixture(params, slack), params.pool());
}

Rational expected_local_multi(const SystemParams& params, long long budget) {
    validate(Scheme::local_mds(), params);
    return mixture_mean(local_mixture(params, budget), params.pool());
}

Rational expected_value(const Scheme& scheme, const SystemParams& params, long long budget) {
    validate(scheme, params);
    switch (scheme.kind) {
        case SchemeKind::kLocalMds:
            return params.a == 1 ? expected_local_single(params)
                                 : expected_local_multi(params, budget);
        case SchemeKind::kGlobalMds:
            return expected_global_multi(params);
        case SchemeKind::kPmds:
            return expected_pmds_single(params, scheme.slack);
    }
    throw std::logic_error("unreachable");
}

Rational lower_bound_simple(const SystemParams& params) {
    validate(Scheme::local_mds(), params);
    return make_rational(params.k * (params.m + 1), 2L);
}

Rational lower_bound_harmonic(const SystemParams& params) {
    validate(Scheme::local_mds(), params);
    const long mn = params.pool();
    // mnH_mn - n sum_i H_{mn-ki} == n sum_i (H_mn - H_{mn-ki}), partial sums
    Rational acc(0);
    for (long i = 1; i <= params.m; ++i) acc += harmonic_diff(mn, params.k * i);
    return params.n * acc;
}

Rational lower_bound_multi(const SystemParams& params) {
    validate(Scheme::local_mds(), params);
    const long mn = params.pool(), m = params.m, k = params.k, a = params.a;
    Rational acc(0);
    for (long i = a - 1; i <= m - 1; ++i) {
        // C(i-1, a-1); the empty selection counts 1 even at i = 0, and the
        // i = a-1 term vanishes for a >= 2
        BigInt coeff = (a == 1) ? BigInt(1) : binomial(i - 1, a - 1);
        if (coeff == 0) continue;
        acc += coeff * (m - i) * harmonic_diff(mn - k * i, k);
    }
    return make_rational(BigInt(mn), binomial(m, a)) * acc;
}

AbsorptionMixture absorption_mixture(const Scheme& scheme, const SystemParams& params,
                                     long long budget) {
    validate(scheme, params);
    switch (scheme.kind) {
        case SchemeKind::kLocalMds: return local_mixture(params, budget);
        case SchemeKind::kGlobalMds: return global_mixture(params);
        case SchemeKind::kPmds: return pmds_mixture(params, scheme.slack);
    }
    throw std::logic_error("unreachable");
}

Rational variance_approx(const Scheme& scheme, const SystemParams& params, long long budget) {
    const long mn = params.pool();
    auto mix = absorption_mixture(scheme, params, budget);
    long max_b = 0;
    for (const auto& [w, b] : mix) max_b = std::max(max_b, b);
    auto hd = harmonic_diff_table(mn, max_b);
    auto vt = wait_variance_table(mn, max_b);
    Rational mean(0), second(0);
    for (const auto& [w, b] : mix) {
        Rational et = mn * hd[static_cast<size_t>(b)];
        mean += w * et;
        second += w * (vt[static_cast<size_t>(b)] + et * et);
    }
    return second - mean * mean;
}

double z_quantile(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("confidence level must lie in (0, 1)");
    const double p = (1.0 + level) / 2.0;

    // Acklam's rational approximation to the inverse normal CDF, then one
    // Halley step against erfc.
    static const double A[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double B[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double C[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double D[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }

    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

double confidence_sample_size(double expectation, double std_dev, double level) {
    if (std_dev < 0.0) throw std::domain_error("standard deviation must be nonnegative");
    return expectation + z_quantile(level) * std_dev;
}

AnalyticReport analyze(const Scheme& scheme, const SystemParams& params,
                       std::span<const double> levels, long long budget) {
    AnalyticReport report;
    report.scheme = scheme;
    report.params = params;
    report.expectation = expected_value(scheme, params, budget);
    report.variance = variance_approx(scheme, params, budget);
    report.variance_method =
        "normal-approximation input: independent geometric waits mixed over absorbing totals, "
        "two-sided z";
    report.std_dev = std::sqrt(to_double(report.variance));
    double expectation = to_double(report.expectation);
    for (double level : levels)
        report.confidence_sizes.emplace_back(
            level, confidence_sample_size(expectation, report.std_dev, level));
    return report;
}

}  // namespace covdep
