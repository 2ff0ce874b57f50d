#include "covdep/scheme.hpp"

#include <algorithm>
#include <numeric>

namespace covdep {

long state_total(const CollectionState& state) {
    return std::accumulate(state.begin(), state.end(), 0L);
}

void validate(const Scheme& scheme, const SystemParams& params) {
    if (params.n < 1) throw std::invalid_argument("n must be at least 1");
    if (params.m < 1) throw std::invalid_argument("m must be at least 1");
    if (params.k < 1 || params.k > params.n)
        throw std::invalid_argument("k must satisfy 1 <= k <= n");
    if (params.a < 1 || params.a > params.m)
        throw std::invalid_argument("a must satisfy 1 <= a <= m");
    if (scheme.kind == SchemeKind::kPmds) {
        if (params.m != 2) throw std::invalid_argument("pmds requires m=2");
        if (params.a != 1) throw std::invalid_argument("pmds supports a single requested file (a=1)");
        long cap = std::min(params.k, params.n - params.k);
        if (scheme.slack < 0 || scheme.slack > cap)
            throw std::invalid_argument("pmds slack must satisfy 0 <= s <= min(k, n-k)");
    } else if (scheme.slack != 0) {
        throw std::invalid_argument("slack is a pmds-only parameter");
    }
}

std::vector<long> category_capacities(const Scheme& scheme, const SystemParams& params) {
    validate(scheme, params);
    switch (scheme.kind) {
        case SchemeKind::kLocalMds: {
            std::vector<long> caps(static_cast<size_t>(params.a), params.n);
            caps.push_back((params.m - params.a) * params.n);
            return caps;
        }
        case SchemeKind::kGlobalMds:
            return {params.a * params.k, params.pool() - params.a * params.k};
        case SchemeKind::kPmds:
            return {params.k, params.n - params.k, params.n};
    }
    throw std::logic_error("unreachable");
}

std::vector<long> default_requested(const SystemParams& params) {
    std::vector<long> files(static_cast<size_t>(params.a));
    std::iota(files.begin(), files.end(), 1L);
    return files;
}

namespace {

void check_requested(const SystemParams& params, std::span<const long> requested) {
    if (static_cast<long>(requested.size()) != params.a)
        throw std::invalid_argument("requested set must contain exactly a files");
    long prev = 0;
    for (long f : requested) {
        if (f < 1 || f > params.m) throw std::invalid_argument("requested file index out of range");
        if (f <= prev) throw std::invalid_argument("requested files must be sorted and unique");
        prev = f;
    }
}

}  // namespace

long category_of(const Scheme& scheme, const SystemParams& params,
                 std::span<const long> requested, long strand_index) {
    validate(scheme, params);
    check_requested(params, requested);
    if (strand_index < 1 || strand_index > params.pool())
        throw std::domain_error("strand index out of range [1, mn]");

    long file = (strand_index - 1) / params.n + 1;
    long pos = (strand_index - 1) % params.n + 1;
    bool systematic = pos <= params.k;
    auto it = std::lower_bound(requested.begin(), requested.end(), file);
    bool is_requested = it != requested.end() && *it == file;
    long rank = it - requested.begin();

    switch (scheme.kind) {
        case SchemeKind::kLocalMds:
            return is_requested ? rank : params.a;
        case SchemeKind::kGlobalMds:
            return (is_requested && systematic) ? 0 : 1;
        case SchemeKind::kPmds:
            if (!is_requested) return 2;
            return systematic ? 0 : 1;
    }
    throw std::logic_error("unreachable");
}

bool decodable(const Scheme& scheme, const SystemParams& params, const CollectionState& state) {
    validate(scheme, params);
    switch (scheme.kind) {
        case SchemeKind::kLocalMds:
            for (long i = 0; i < params.a; ++i)
                if (state[static_cast<size_t>(i)] < params.k) return false;
            return true;
        case SchemeKind::kGlobalMds:
            return state[0] == params.a * params.k || state_total(state) >= params.m * params.k;
        case SchemeKind::kPmds: {
            long row = state[0] + state[1];
            if (state[0] == params.k) return true;
            if (row >= params.k + scheme.slack) return true;
            return state_total(state) >= 2 * params.k && row >= params.k - scheme.slack;
        }
    }
    throw std::logic_error("unreachable");
}

long long count_states(const Scheme& scheme, const SystemParams& params) {
    long long count = 1;
    for (long cap : category_capacities(scheme, params)) count *= cap + 1;
    return count;
}

std::vector<CollectionState> enumerate_states(const Scheme& scheme, const SystemParams& params,
                                              long long budget) {
    const auto caps = category_capacities(scheme, params);
    long long total = count_states(scheme, params);
    if (total > budget) throw StateBudgetError(total, budget);

    std::vector<CollectionState> states;
    states.reserve(static_cast<size_t>(total));
    CollectionState cur(caps.size(), 0);
    for (;;) {
        states.push_back(cur);
        size_t c = caps.size();
        while (c > 0) {
            --c;
            if (cur[c] < caps[c]) {
                ++cur[c];
                std::fill(cur.begin() + static_cast<long>(c) + 1, cur.end(), 0L);
                break;
            }
            if (c == 0) return states;
        }
    }
}

}  // namespace covdep
