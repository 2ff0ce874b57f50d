#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "covdep/rng.hpp"
#include "covdep/scheme.hpp"

namespace covdep {

struct ExperimentConfig {
    Scheme scheme;
    SystemParams params;
    std::vector<long> requested;  // empty -> {1..a}
    uint64_t trials = 1'000'000;
    uint64_t seed = 42;
    int workers = 1;
    std::vector<double> quantile_levels = {0.90, 0.95, 0.99};
    long ecdf_max = 0;  // 0 -> 64 * m * k
};

struct DistributionSummary {
    uint64_t trials = 0;
    double mean = 0.0;
    double sample_variance = 0.0;
    uint64_t min_draws = 0;
    uint64_t max_draws = 0;
    std::vector<uint64_t> histogram;  // histogram[r] = trials that took exactly r draws
    uint64_t overflow = 0;            // trials past the histogram support
    long ecdf_max = 0;
    std::vector<std::pair<double, long>> quantiles;  // (level, draws)
};

// Draws uniformly from [1, mn] until the requested files decode; repeats do
// not advance the state. Returns the draw count.
uint64_t run_trial(const Scheme& scheme, const SystemParams& params,
                   std::span<const long> requested, Xoshiro256StarStar& rng);

// Runs config.trials trials split across workers, each worker on its own
// deterministic stream; the merged summary depends only on (seed, workers,
// config), not on scheduling.
DistributionSummary run_experiment(const ExperimentConfig& config);

// Smallest r with ECDF(r) >= level.
long empirical_quantile(const DistributionSummary& summary, double level);

// ECDF over r = 0..last nonzero histogram bin.
std::vector<double> ecdf(const DistributionSummary& summary);

}  // namespace covdep
