#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "onomastat/errors.hpp"

namespace onomastat {

// 64-bit finalizer used to expand user seeds into engine state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Minimal PCG32 (O'Neill, pcg-random.org), hand-rolled instead of <random>
// engines so that streams are cheap to construct and every draw is
// identical across platforms and standard libraries.
class Pcg32 {
public:
    Pcg32(std::uint64_t init_state, std::uint64_t init_seq) {
        state_ = 0u;
        inc_ = (init_seq << 1) | 1u;
        next_u32();
        state_ += init_state;
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18) ^ old) >> 27);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59);
        return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) by rejection; unbiased.
    std::uint64_t uniform_index(std::uint64_t bound) {
        if (bound == 0) throw ConfigError("uniform_index: bound must be positive");
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

// Engine for Monte Carlo replicate `index` of a run with the given seed.
// Replicates draw only from their own substream, so results do not depend
// on worker count or evaluation order.
inline Pcg32 substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return Pcg32(a, b);
}

// Stable seed for an independent phase of one run (e.g. the
// interval-construction pass vs the replicate pass of a power study).
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : tag) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t s = seed ^ h;
    return splitmix64(s);
}

// Samples indices proportional to integer weights by inversion on the
// cumulative weight table. All-integer, so the sampled proportions are
// exactly weight/total with no floating-point drift.
class WeightedIndexSampler {
public:
    explicit WeightedIndexSampler(const std::vector<long long>& weights) {
        cum_.reserve(weights.size());
        unsigned long long running = 0;
        for (long long w : weights) {
            if (w < 0) throw ConfigError("WeightedIndexSampler: negative weight");
            running += static_cast<unsigned long long>(w);
            cum_.push_back(running);
        }
        if (running == 0) throw ConfigError("WeightedIndexSampler: total weight is zero");
    }

    std::size_t operator()(Pcg32& rng) const {
        unsigned long long r = rng.uniform_index(cum_.back());
        std::size_t lo = 0, hi = cum_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (r < cum_[mid])
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }

    unsigned long long total() const { return cum_.back(); }

private:
    std::vector<unsigned long long> cum_;
};

}  // namespace onomastat
