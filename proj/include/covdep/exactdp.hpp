#pragma once

#include <vector>

#include "covdep/rational.hpp"
#include "covdep/scheme.hpp"

namespace covdep {

// Absorbing chain over CollectionState. Transitions only increase the total
// count or self-loop, so expectations follow from one backward sweep and the
// full distribution from forward evolution; no linear solves.
struct ChainModel {
    Scheme scheme;
    SystemParams params;
    std::vector<long> capacities;
    long pool = 0;                     // mn
    long long num_states = 0;
    std::vector<long long> strides;    // mixed-radix strides, lexicographic
    std::vector<uint8_t> absorbing;    // per state index
    std::vector<uint16_t> total;       // per state index

    long long index_of(const CollectionState& state) const;
    CollectionState state_of(long long index) const;
};

ChainModel build_chain(const Scheme& scheme, const SystemParams& params,
                       long long budget = kDefaultStateBudget);

// Expected draws to absorption from the empty state, exactly. First-step
// analysis by backward induction on the total count; the self-loop factors
// out as the geometric expected wait pool/(pool - total).
Rational exact_expectation(const Scheme& scheme, const SystemParams& params,
                           long long budget = kDefaultStateBudget);
Rational exact_expectation(const ChainModel& chain);

struct TailResult {
    std::vector<double> survival;   // survival[r] = Pr[draws-to-decode > r], r = 0..r_max
    double residual = 0.0;          // survival at r_max
    bool converged = false;         // residual below 1e-12
    double float_error_bound = 0.0; // r_max * states * machine epsilon
    double worst_remaining = 0.0;   // upper bound on expected remaining draws from any state
};

// Evolves the draw-by-draw distribution (self-loops included, absorbing
// states terminal) in float64.
TailResult exact_tail(const Scheme& scheme, const SystemParams& params, long r_max,
                      long long budget = kDefaultStateBudget);
TailResult exact_tail(const ChainModel& chain, long r_max);

struct TailMean {
    double value = 0.0;        // sum of the survival sequence
    double error_bound = 0.0;  // residual mass carried to absorption, plus float error
    bool converged = false;
};

// E[draws] = sum_{r>=0} Pr[draws > r]. A non-converged tail is reported
// through the error bound rather than rejected.
TailMean exact_mean_from_tail(const TailResult& tail);

}  // namespace covdep
