#pragma once

#include <cstdint>

namespace covdep {

// SplitMix64 (Steele, Lea, Vigna). Used for seeding and stream derivation.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    uint64_t state_;
};

// xoshiro256** (Blackman, Vigna). Integer-only pipeline, so sequences are
// bit-identical across platforms for a given seed.
class Xoshiro256StarStar {
  public:
    explicit Xoshiro256StarStar(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : state_) word = sm.next();
    }

    // Derives the stream for one worker: streams for distinct worker indices
    // under the same experiment seed are decorrelated by the SplitMix64 mix.
    static Xoshiro256StarStar for_worker(uint64_t seed, uint64_t worker) {
        SplitMix64 sm(seed);
        uint64_t base = sm.next();
        return Xoshiro256StarStar(base ^ (0x9e3779b97f4a7c15ULL * (worker + 1)));
    }

    uint64_t next() {
        uint64_t result = rotl(state_[1] * 5, 7) * 9;
        uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform draw in [0, bound) by Lemire's multiply-with-rejection.
    uint64_t below(uint64_t bound) {
        unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
        uint64_t low = static_cast<uint64_t>(product);
        if (low < bound) {
            uint64_t threshold = (-bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<uint64_t>(product);
            }
        }
        return static_cast<uint64_t>(product >> 64);
    }

  private:
    static uint64_t rotl(uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }
    uint64_t state_[4];
};

}  // namespace covdep
