#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace covdep {

// Strand layout convention used everywhere: strands are indexed 1..mn,
// file i owns positions ((i-1)n, i*n], and the first k positions of a file
// are its systematic strands. All schemes are symmetric under file
// relabeling, so results do not depend on this choice.

enum class SchemeKind { kLocalMds, kGlobalMds, kPmds };

struct Scheme {
    SchemeKind kind = SchemeKind::kLocalMds;
    long slack = 0;  // PMDS only

    static Scheme local_mds() { return {SchemeKind::kLocalMds, 0}; }
    static Scheme global_mds() { return {SchemeKind::kGlobalMds, 0}; }
    static Scheme pmds(long slack) { return {SchemeKind::kPmds, slack}; }

    std::string_view name() const {
        switch (kind) {
            case SchemeKind::kLocalMds: return "local";
            case SchemeKind::kGlobalMds: return "global";
            case SchemeKind::kPmds: return "pmds";
        }
        return "?";
    }
};

struct SystemParams {
    long n = 0;  // encoded strands per file
    long k = 0;  // information strands per file
    long m = 0;  // stored files
    long a = 1;  // requested files

    long pool() const { return m * n; }
};

// Per-category distinct-strand counts; the coordinate meaning depends on the
// scheme (see category_capacities).
using CollectionState = std::vector<long>;

long state_total(const CollectionState& state);

// Throws std::invalid_argument naming the violated invariant.
void validate(const Scheme& scheme, const SystemParams& params);

// Capacity of each CollectionState coordinate. Local MDS: one entry per
// requested file (capacity n) plus the pooled remainder ((m-a)n). Global MDS:
// requested systematic strands (ak) and everything else (mn-ak). PMDS:
// systematic / non-systematic strands of the requested file (k, n-k) and the
// other file (n).
std::vector<long> category_capacities(const Scheme& scheme, const SystemParams& params);

// Requested files default to {1, ..., a}.
std::vector<long> default_requested(const SystemParams& params);

// Coordinate incremented when strand_index (1-based in [1, mn]) is first
// drawn. requested must be sorted, unique, of size a.
long category_of(const Scheme& scheme, const SystemParams& params,
                 std::span<const long> requested, long strand_index);

// True iff the requested file set is recoverable from the collected strands:
//   local:  every requested file has >= k distinct strands;
//   global: all ak requested systematic strands, or >= mk distinct overall;
//   pmds:   all k systematic strands of the requested file, or >= k+s
//           distinct strands of its row, or >= 2k distinct overall with
//           >= k-s of them from its row.
bool decodable(const Scheme& scheme, const SystemParams& params, const CollectionState& state);

inline constexpr long long kDefaultStateBudget = 2'000'000;

class StateBudgetError : public std::runtime_error {
  public:
    StateBudgetError(long long states, long long budget)
        : std::runtime_error("state space of " + std::to_string(states) +
                             " states exceeds budget of " + std::to_string(budget)),
          states_(states),
          budget_(budget) {}
    long long states() const { return states_; }
    long long budget() const { return budget_; }

  private:
    long long states_;
    long long budget_;
};

// All states satisfying the coordinate bounds, lexicographic, each once.
std::vector<CollectionState> enumerate_states(const Scheme& scheme, const SystemParams& params,
                                              long long budget = kDefaultStateBudget);

long long count_states(const Scheme& scheme, const SystemParams& params);

}  // namespace covdep
