#include "covdep/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace covdep {

namespace {

constexpr uint64_t kMaxDrawsPerTrial = 1'000'000'000ULL;

// Per-experiment constants plus per-trial scratch, so the trial loop touches
// only flat arrays.
class TrialRunner {
  public:
    TrialRunner(const Scheme& scheme, const SystemParams& params, std::span<const long> requested)
        : kind_(scheme.kind),
          pool_(static_cast<uint64_t>(params.pool())),
          need_local_(params.k),
          need_systematic_(params.a * params.k),
          need_global_(params.m * params.k),
          slack_lo_(params.k - scheme.slack),
          slack_hi_(params.k + scheme.slack),
          files_requested_(params.a) {
        validate(scheme, params);
        category_.resize(pool_);
        for (uint64_t x = 0; x < pool_; ++x)
            category_[x] = static_cast<uint8_t>(
                category_of(scheme, params, requested, static_cast<long>(x) + 1));
        counts_.assign(category_capacities(scheme, params).size(), 0);
        seen_.assign((pool_ + 63) / 64, 0);
    }

    uint64_t run(Xoshiro256StarStar& rng) {
        std::fill(seen_.begin(), seen_.end(), 0);
        std::fill(counts_.begin(), counts_.end(), 0L);
        long distinct = 0;
        long files_done = 0;
        for (uint64_t draws = 1; draws <= kMaxDrawsPerTrial; ++draws) {
            uint64_t x = rng.below(pool_);
            uint64_t bit = 1ULL << (x & 63);
            uint64_t& word = seen_[x >> 6];
            if (word & bit) continue;
            word |= bit;
            int c = category_[x];
            long count = ++counts_[static_cast<size_t>(c)];
            ++distinct;
            switch (kind_) {
                case SchemeKind::kLocalMds:
                    if (c < files_requested_ && count == need_local_ && ++files_done == files_requested_)
                        return draws;
                    break;
                case SchemeKind::kGlobalMds:
                    if (counts_[0] == need_systematic_ || distinct >= need_global_) return draws;
                    break;
                case SchemeKind::kPmds: {
                    long row = counts_[0] + counts_[1];
                    if (counts_[0] == need_local_ || row >= slack_hi_ ||
                        (distinct >= 2 * need_local_ && row >= slack_lo_))
                        return draws;
                    break;
                }
            }
        }
        throw std::runtime_error("trial exceeded the hard cap of 1e9 draws without decoding");
    }

  private:
    SchemeKind kind_;
    uint64_t pool_;
    long need_local_;
    long need_systematic_;
    long need_global_;
    long slack_lo_;
    long slack_hi_;
    long files_requested_;
    std::vector<uint8_t> category_;
    std::vector<long> counts_;
    std::vector<uint64_t> seen_;
};

struct WorkerTally {
    std::vector<uint64_t> histogram;
    uint64_t overflow = 0;
    uint64_t min_draws = std::numeric_limits<uint64_t>::max();
    uint64_t max_draws = 0;
    unsigned __int128 sum = 0;
    unsigned __int128 sum_squares = 0;
};

void validate_config(const ExperimentConfig& config) {
    validate(config.scheme, config.params);
    if (config.trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (config.workers < 1) throw std::invalid_argument("workers must be at least 1");
    double prev = 0.0;
    for (double level : config.quantile_levels) {
        if (!(level > 0.0 && level < 1.0))
            throw std::invalid_argument("quantile levels must lie in (0, 1)");
        if (level <= prev) throw std::invalid_argument("quantile levels must be strictly increasing");
        prev = level;
    }
    if (config.ecdf_max < 0) throw std::invalid_argument("ecdf_max must be nonnegative");
}

}  // namespace

uint64_t run_trial(const Scheme& scheme, const SystemParams& params,
                   std::span<const long> requested, Xoshiro256StarStar& rng) {
    TrialRunner runner(scheme, params, requested);
    return runner.run(rng);
}

DistributionSummary run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    const auto requested =
        config.requested.empty() ? default_requested(config.params) : config.requested;
    const long ecdf_max =
        config.ecdf_max > 0 ? config.ecdf_max : 64 * config.params.m * config.params.k;

    const int workers = config.workers;
    std::vector<WorkerTally> tallies(static_cast<size_t>(workers));
    auto worker_body = [&](int w) {
        WorkerTally& tally = tallies[static_cast<size_t>(w)];
        tally.histogram.assign(static_cast<size_t>(ecdf_max) + 1, 0);
        uint64_t share = config.trials / static_cast<uint64_t>(workers);
        if (static_cast<uint64_t>(w) < config.trials % static_cast<uint64_t>(workers)) ++share;
        if (share == 0) return;
        auto rng = Xoshiro256StarStar::for_worker(config.seed, static_cast<uint64_t>(w));
        TrialRunner runner(config.scheme, config.params, requested);
        for (uint64_t t = 0; t < share; ++t) {
            uint64_t draws = runner.run(rng);
            if (draws <= static_cast<uint64_t>(ecdf_max))
                ++tally.histogram[static_cast<size_t>(draws)];
            else
                ++tally.overflow;
            tally.min_draws = std::min(tally.min_draws, draws);
            tally.max_draws = std::max(tally.max_draws, draws);
            tally.sum += draws;
            tally.sum_squares += static_cast<unsigned __int128>(draws) * draws;
        }
    };

    if (workers == 1) {
        worker_body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_body, w);
        for (auto& thread : pool) thread.join();
    }

    DistributionSummary summary;
    summary.trials = config.trials;
    summary.ecdf_max = ecdf_max;
    summary.histogram.assign(static_cast<size_t>(ecdf_max) + 1, 0);
    summary.min_draws = std::numeric_limits<uint64_t>::max();
    unsigned __int128 sum = 0, sum_squares = 0;
    for (const auto& tally : tallies) {
        if (tally.histogram.empty()) continue;
        for (size_t r = 0; r < summary.histogram.size(); ++r)
            summary.histogram[r] += tally.histogram[r];
        summary.overflow += tally.overflow;
        summary.min_draws = std::min(summary.min_draws, tally.min_draws);
        summary.max_draws = std::max(summary.max_draws, tally.max_draws);
        sum += tally.sum;
        sum_squares += tally.sum_squares;
    }

    // integer accumulators keep the moments exact and merge-order free
    summary.mean = static_cast<double>(sum) / static_cast<double>(config.trials);
    if (config.trials > 1) {
        unsigned __int128 n = config.trials;
        __int128 numer = static_cast<__int128>(n * sum_squares) - static_cast<__int128>(sum * sum);
        summary.sample_variance = static_cast<double>(numer) /
                                  (static_cast<double>(config.trials) *
                                   static_cast<double>(config.trials - 1));
    }
    for (double level : config.quantile_levels)
        summary.quantiles.emplace_back(level, empirical_quantile(summary, level));
    return summary;
}

long empirical_quantile(const DistributionSummary& summary, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("quantile level must lie in (0, 1)");
    uint64_t cumulative = 0;
    for (size_t r = 0; r < summary.histogram.size(); ++r) {
        cumulative += summary.histogram[r];
        double reached = static_cast<double>(cumulative) / static_cast<double>(summary.trials);
        if (reached >= level) return static_cast<long>(r);
    }
    throw std::runtime_error("quantile level " + std::to_string(level) +
                             " falls past the histogram support (ecdf_max=" +
                             std::to_string(summary.ecdf_max) + ")");
}

std::vector<double> ecdf(const DistributionSummary& summary) {
    size_t last = 0;
    for (size_t r = 0; r < summary.histogram.size(); ++r)
        if (summary.histogram[r] > 0) last = r;
    std::vector<double> cdf(last + 1, 0.0);
    uint64_t cumulative = 0;
    for (size_t r = 0; r <= last; ++r) {
        cumulative += summary.histogram[r];
        cdf[r] = static_cast<double>(cumulative) / static_cast<double>(summary.trials);
    }
    return cdf;
}

}  // namespace covdep
