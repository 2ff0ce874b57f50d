#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "covdep/analytic.hpp"
#include "covdep/combinatorics.hpp"
#include "covdep/exactdp.hpp"

using namespace covdep;

TEST_CASE("expectation on hand-checked instances") {
    // single file, n=5, k=3: 5(H_5 - H_2) = 47/12
    CHECK(exact_expectation(Scheme::local_mds(), {5, 3, 1, 1}) == make_rational(47L, 12L));

    // n=k: collecting ak specific strands out of mk costs mkH_ak
    CHECK(exact_expectation(Scheme::local_mds(), {3, 3, 2, 2}) == 6 * harmonic(6));
    CHECK(exact_expectation(Scheme::local_mds(), {2, 2, 3, 1}) == 6 * harmonic(2));

    // degenerate: any first draw decodes
    CHECK(exact_expectation(Scheme::local_mds(), {2, 1, 1, 1}) == Rational(1));
}

TEST_CASE("chain expectation equals the closed forms") {
    CHECK(exact_expectation(Scheme::global_mds(), {6, 2, 2, 1}) ==
          expected_global_single({6, 2, 2, 1}));
    CHECK(exact_expectation(Scheme::pmds(1), {6, 2, 2, 1}) ==
          expected_pmds_single({6, 2, 2, 1}, 1));
    CHECK(exact_expectation(Scheme::local_mds(), {4, 2, 3, 2}) ==
          expected_local_multi({4, 2, 3, 2}));
}

TEST_CASE("state budget is enforced") {
    CHECK_THROWS_AS(exact_expectation(Scheme::pmds(1), {10, 4, 2, 1}, 100), StateBudgetError);
}

TEST_CASE("tail starts at one, is nonincreasing, and stays in [0,1]") {
    auto tail = exact_tail(Scheme::global_mds(), {6, 3, 2, 1}, 200);
    CHECK(tail.survival[0] == 1.0);
    for (size_t r = 1; r < tail.survival.size(); ++r) {
        CHECK(tail.survival[r] <= tail.survival[r - 1] + 1e-15);
        CHECK(tail.survival[r] >= 0.0);
        CHECK(tail.survival[r] <= 1.0);
    }
    CHECK(tail.converged);
}

TEST_CASE("degenerate chain decodes on the first draw") {
    auto tail = exact_tail(Scheme::local_mds(), {2, 1, 1, 1}, 10);
    CHECK(tail.survival[0] == 1.0);
    for (size_t r = 1; r < tail.survival.size(); ++r) CHECK(tail.survival[r] == 0.0);
    auto mean = exact_mean_from_tail(tail);
    CHECK(mean.value == 1.0);
    CHECK(mean.converged);
}

TEST_CASE("one-step survival of the two-file k=1 global chain is 5/6") {
    auto tail = exact_tail(Scheme::global_mds(), {3, 1, 2, 1}, 5);
    CHECK(tail.survival[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("summed tail reproduces the exact expectation") {
    struct Case {
        Scheme scheme;
        SystemParams params;
    };
    const Case cases[] = {
        {Scheme::local_mds(), {5, 3, 1, 1}},
        {Scheme::global_mds(), {6, 2, 2, 1}},
        {Scheme::pmds(1), {6, 2, 2, 1}},
        {Scheme::local_mds(), {3, 2, 2, 2}},
    };
    for (const auto& c : cases) {
        ChainModel chain = build_chain(c.scheme, c.params);
        auto tail = exact_tail(chain, 50 * c.params.pool());
        REQUIRE(tail.converged);
        auto mean = exact_mean_from_tail(tail);
        CHECK(std::abs(mean.value - to_double(exact_expectation(chain))) <= 1e-9);
    }
}

TEST_CASE("non-converged tails report the residual instead of failing") {
    auto tail = exact_tail(Scheme::global_mds(), {6, 3, 2, 1}, 3);
    CHECK_FALSE(tail.converged);
    auto mean = exact_mean_from_tail(tail);
    CHECK_FALSE(mean.converged);
    CHECK(mean.error_bound >= tail.residual);
    double truth = to_double(exact_expectation(Scheme::global_mds(), {6, 3, 2, 1}));
    CHECK(mean.value <= truth);
    CHECK(mean.value + mean.error_bound >= truth - 1e-9);
}

namespace {

// Rational evolution of the embedded jump chain (one new strand per step,
// absorbing states terminal), used to check the collected-strand law.
std::vector<Rational> jump_chain_distribution(const ChainModel& chain, long steps) {
    std::vector<Rational> mass(static_cast<size_t>(chain.num_states), Rational(0));
    mass[0] = Rational(1);
    CollectionState state(chain.capacities.size(), 0);
    for (long step = 0; step < steps; ++step) {
        std::vector<Rational> next(static_cast<size_t>(chain.num_states), Rational(0));
        for (long long idx = 0; idx < chain.num_states; ++idx) {
            const Rational& p = mass[static_cast<size_t>(idx)];
            if (p == 0 || chain.absorbing[idx]) continue;
            state = chain.state_of(idx);
            long t = chain.total[idx];
            for (size_t c = 0; c < chain.capacities.size(); ++c) {
                long room = chain.capacities[c] - state[c];
                if (room > 0)
                    next[static_cast<size_t>(idx + chain.strides[c])] +=
                        p * make_rational(room, chain.pool - t);
            }
        }
        mass.swap(next);
    }
    return mass;
}

}  // namespace

TEST_CASE("collected strands follow the without-replacement law at every level") {
    // global: Pr[state (i,j) at level t, no absorption] = C(ak,i)C(mn-ak,j)/C(mn,t)
    {
        ChainModel chain = build_chain(Scheme::global_mds(), {5, 2, 2, 1});
        std::vector<Rational> mass(static_cast<size_t>(chain.num_states), Rational(0));
        mass[0] = Rational(1);
        for (long t = 1; t <= chain.pool; ++t) {
            mass = jump_chain_distribution(chain, t);
            for (long long idx = 0; idx < chain.num_states; ++idx) {
                if (chain.absorbing[idx] || chain.total[idx] != t) continue;
                auto state = chain.state_of(idx);
                std::vector<BinomialArgs> num{{chain.capacities[0], state[0]},
                                              {chain.capacities[1], state[1]}};
                std::vector<BinomialArgs> den{{chain.pool, t}};
                CHECK(mass[static_cast<size_t>(idx)] == hypergeometric_ratio(num, den));
            }
        }
    }
    // pmds: Pr[(i,j,h)] = C(k,i)C(n-k,j)C(n,h)/C(2n,t)
    {
        ChainModel chain = build_chain(Scheme::pmds(1), {5, 2, 2, 1});
        for (long t = 1; t <= chain.pool; ++t) {
            auto mass = jump_chain_distribution(chain, t);
            for (long long idx = 0; idx < chain.num_states; ++idx) {
                if (chain.absorbing[idx] || chain.total[idx] != t) continue;
                auto state = chain.state_of(idx);
                std::vector<BinomialArgs> num{{chain.capacities[0], state[0]},
                                              {chain.capacities[1], state[1]},
                                              {chain.capacities[2], state[2]}};
                std::vector<BinomialArgs> den{{chain.pool, t}};
                CHECK(mass[static_cast<size_t>(idx)] == hypergeometric_ratio(num, den));
            }
        }
    }
}

namespace {

// Independent oracle over raw seen-subsets of the pool: finer than the
// count-vector chain, so it exercises the lumping. Feasible for mn <= 6.
std::vector<double> subset_survival(const Scheme& scheme, const SystemParams& params,
                                    long r_max) {
    const long mn = params.pool();
    REQUIRE(mn <= 20);
    const auto requested = default_requested(params);
    const size_t subsets = static_cast<size_t>(1) << mn;

    std::vector<uint8_t> absorbed(subsets);
    for (size_t mask = 0; mask < subsets; ++mask) {
        CollectionState state(category_capacities(scheme, params).size(), 0);
        for (long x = 0; x < mn; ++x)
            if (mask & (static_cast<size_t>(1) << x))
                ++state[static_cast<size_t>(category_of(scheme, params, requested, x + 1))];
        absorbed[mask] = decodable(scheme, params, state) ? 1 : 0;
    }

    std::vector<double> mass(subsets, 0.0), next(subsets);
    mass[0] = 1.0;
    std::vector<double> survival;
    for (long r = 0; r <= r_max; ++r) {
        double alive = 0.0;
        for (size_t mask = 0; mask < subsets; ++mask)
            if (!absorbed[mask]) alive += mass[mask];
        survival.push_back(alive);
        if (r == r_max) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t mask = 0; mask < subsets; ++mask) {
            double p = mass[mask];
            if (p == 0.0) continue;
            if (absorbed[mask]) {
                next[mask] += p;
                continue;
            }
            for (long x = 0; x < mn; ++x)
                next[mask | (static_cast<size_t>(1) << x)] += p / static_cast<double>(mn);
        }
        mass.swap(next);
    }
    return survival;
}

}  // namespace

TEST_CASE("count-vector chain agrees with the raw subset process") {
    struct Case {
        Scheme scheme;
        SystemParams params;
    };
    const Case cases[] = {
        {Scheme::global_mds(), {3, 2, 2, 1}},
        {Scheme::local_mds(), {3, 2, 2, 2}},
        {Scheme::pmds(1), {3, 2, 2, 1}},
    };
    for (const auto& c : cases) {
        auto brute = subset_survival(c.scheme, c.params, 25);
        auto tail = exact_tail(c.scheme, c.params, 25);
        for (size_t r = 0; r < brute.size(); ++r)
            CHECK(std::abs(brute[r] - tail.survival[r]) <= 1e-12);
        // truncated mean agrees within the leftover mass bound
        double brute_mean = 0.0;
        for (double s : brute) brute_mean += s;
        double truth = to_double(exact_expectation(c.scheme, c.params));
        CHECK(brute_mean <= truth + 1e-9);
        CHECK(truth - brute_mean <= brute.back() * tail.worst_remaining + 1e-9);
    }
}
