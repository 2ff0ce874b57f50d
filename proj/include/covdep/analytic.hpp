#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covdep/rational.hpp"
#include "covdep/scheme.hpp"

namespace covdep {

// Closed-form expected draw counts, exact. Single-file forms require a == 1.
Rational expected_local_single(const SystemParams& params);
Rational expected_global_single(const SystemParams& params);
Rational expected_pmds_single(const SystemParams& params, long slack);

// Multi-file forms, 1 <= a <= m. The local form enumerates the family of
// last-transient states, which grows like a * (n-k+1)^(a-1) * ((m-a)n+1);
// exceeding the budget is a StateBudgetError.
Rational expected_local_multi(const SystemParams& params,
                              long long budget = kDefaultStateBudget);
Rational expected_global_multi(const SystemParams& params);

Rational expected_value(const Scheme& scheme, const SystemParams& params,
                        long long budget = kDefaultStateBudget);

// Lower bounds on the optimal expected draw count.
Rational lower_bound_simple(const SystemParams& params);    // k(m+1)/2
Rational lower_bound_harmonic(const SystemParams& params);  // mnH_mn - n sum_i H_{mn-ki}
Rational lower_bound_multi(const SystemParams& params);     // general-a refinement

// Absorption-law mixture of a scheme: (probability, total distinct strands
// collected at absorption). Weights sum to 1.
using AbsorptionMixture = std::vector<std::pair<Rational, long>>;
AbsorptionMixture absorption_mixture(const Scheme& scheme, const SystemParams& params,
                                     long long budget = kDefaultStateBudget);

// Variance of the draw count via the geometric-wait decomposition: the wait
// for each new distinct strand is an independent geometric, so
// E[draws^2] = sum over the absorption mixture of Var(T(b)) + E[T(b)]^2.
Rational variance_approx(const Scheme& scheme, const SystemParams& params,
                         long long budget = kDefaultStateBudget);

// Two-sided standard-normal quantile: z(0.95) = 1.96.
double z_quantile(double level);

// expectation + z(level) * std_dev; the normal-approximation draw budget
// that reaches the requested success probability.
double confidence_sample_size(double expectation, double std_dev, double level);

struct AnalyticReport {
    Scheme scheme;
    SystemParams params;
    Rational expectation;
    Rational variance;
    std::string variance_method;
    double std_dev = 0.0;
    std::vector<std::pair<double, double>> confidence_sizes;  // (level, size)
};

AnalyticReport analyze(const Scheme& scheme, const SystemParams& params,
                       std::span<const double> levels,
                       long long budget = kDefaultStateBudget);

}  // namespace covdep
