#include "covdep/exactdp.hpp"

#include <cmath>
#include <limits>

#include "covdep/combinatorics.hpp"

namespace covdep {

long long ChainModel::index_of(const CollectionState& state) const {
    long long idx = 0;
    for (size_t c = 0; c < capacities.size(); ++c) idx += state[c] * strides[c];
    return idx;
}

CollectionState ChainModel::state_of(long long index) const {
    CollectionState state(capacities.size(), 0);
    for (size_t c = 0; c < capacities.size(); ++c) {
        state[c] = index / strides[c];
        index %= strides[c];
    }
    return state;
}

ChainModel build_chain(const Scheme& scheme, const SystemParams& params, long long budget) {
    validate(scheme, params);
    ChainModel chain;
    chain.scheme = scheme;
    chain.params = params;
    chain.capacities = category_capacities(scheme, params);
    chain.pool = params.pool();
    chain.num_states = count_states(scheme, params);
    if (chain.num_states > budget) throw StateBudgetError(chain.num_states, budget);

    chain.strides.assign(chain.capacities.size(), 1);
    for (size_t c = chain.capacities.size() - 1; c > 0; --c)
        chain.strides[c - 1] = chain.strides[c] * (chain.capacities[c] + 1);

    chain.absorbing.resize(static_cast<size_t>(chain.num_states));
    chain.total.resize(static_cast<size_t>(chain.num_states));
    CollectionState state(chain.capacities.size(), 0);
    for (long long idx = 0; idx < chain.num_states; ++idx) {
        chain.absorbing[idx] = decodable(scheme, params, state) ? 1 : 0;
        chain.total[idx] = static_cast<uint16_t>(state_total(state));
        size_t c = chain.capacities.size();
        while (c > 0) {
            --c;
            if (state[c] < chain.capacities[c]) {
                ++state[c];
                std::fill(state.begin() + static_cast<long>(c) + 1, state.end(), 0L);
                break;
            }
        }
    }
    return chain;
}

Rational exact_expectation(const ChainModel& chain) {
    const long mn = chain.pool;
    std::vector<std::vector<long long>> by_total(static_cast<size_t>(mn) + 1);
    for (long long idx = 0; idx < chain.num_states; ++idx)
        if (!chain.absorbing[idx]) by_total[chain.total[idx]].push_back(idx);

    std::vector<Rational> expect(static_cast<size_t>(chain.num_states), Rational(0));
    CollectionState state(chain.capacities.size(), 0);
    for (long t = mn; t >= 0; --t) {
        for (long long idx : by_total[static_cast<size_t>(t)]) {
            state = chain.state_of(idx);
            Rational acc(mn);
            for (size_t c = 0; c < chain.capacities.size(); ++c) {
                long room = chain.capacities[c] - state[c];
                if (room > 0) acc += room * expect[idx + chain.strides[c]];
            }
            acc /= mn - t;
            expect[static_cast<size_t>(idx)] = std::move(acc);
        }
    }
    return expect[0];
}

Rational exact_expectation(const Scheme& scheme, const SystemParams& params, long long budget) {
    return exact_expectation(build_chain(scheme, params, budget));
}

TailResult exact_tail(const ChainModel& chain, long r_max) {
    if (r_max < 0) throw std::domain_error("exact_tail: r_max must be nonnegative");
    const long mn = chain.pool;
    const double inv_pool = 1.0 / static_cast<double>(mn);

    std::vector<double> mass(static_cast<size_t>(chain.num_states), 0.0);
    std::vector<double> next(static_cast<size_t>(chain.num_states), 0.0);
    mass[0] = 1.0;

    TailResult result;
    result.survival.reserve(static_cast<size_t>(r_max) + 1);
    CollectionState state(chain.capacities.size(), 0);
    for (long r = 0; r <= r_max; ++r) {
        double surviving = 0.0;
        for (long long idx = 0; idx < chain.num_states; ++idx)
            if (!chain.absorbing[idx]) surviving += mass[static_cast<size_t>(idx)];
        result.survival.push_back(surviving);
        if (r == r_max) break;

        std::fill(next.begin(), next.end(), 0.0);
        for (long long idx = 0; idx < chain.num_states; ++idx) {
            double p = mass[static_cast<size_t>(idx)];
            if (p == 0.0) continue;
            if (chain.absorbing[idx]) {
                next[static_cast<size_t>(idx)] += p;
                continue;
            }
            state = chain.state_of(idx);
            long t = chain.total[idx];
            next[static_cast<size_t>(idx)] += p * (static_cast<double>(t) * inv_pool);
            for (size_t c = 0; c < chain.capacities.size(); ++c) {
                long room = chain.capacities[c] - state[c];
                if (room > 0)
                    next[static_cast<size_t>(idx + chain.strides[c])] +=
                        p * (static_cast<double>(room) * inv_pool);
            }
        }
        mass.swap(next);
    }

    result.residual = result.survival.back();
    result.converged = result.residual < 1e-12;
    result.float_error_bound = static_cast<double>(r_max) * static_cast<double>(chain.num_states) *
                               std::numeric_limits<double>::epsilon();
    double h = 0.0;
    for (long i = 1; i <= mn; ++i) h += 1.0 / static_cast<double>(i);
    result.worst_remaining = static_cast<double>(mn) * h;
    return result;
}

TailResult exact_tail(const Scheme& scheme, const SystemParams& params, long r_max,
                      long long budget) {
    return exact_tail(build_chain(scheme, params, budget), r_max);
}

TailMean exact_mean_from_tail(const TailResult& tail) {
    TailMean mean;
    double acc = 0.0;
    for (double s : tail.survival) acc += s;
    mean.value = acc;
    mean.error_bound = tail.residual * tail.worst_remaining + tail.float_error_bound;
    mean.converged = tail.converged;
    return mean;
}

}  // namespace covdep
