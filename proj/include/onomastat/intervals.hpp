#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "onomastat/corpus.hpp"

namespace onomastat {

struct IntInterval {
    long long lo = 0;
    long long hi = 0;
    bool contains(long long v) const { return v >= lo && v <= hi; }
};

// Per-name central intervals for the count of each requested name in a
// sample of size n drawn from the reference proportions, estimated from B
// multinomial replicates. Endpoint convention: lo is the smallest count c
// with empirical P(X <= c) >= (1-level)/2, hi the smallest with
// P(X <= c) >= (1+level)/2; the interval mass is then >= level.
// Every requested name must be in the reference support (adjust first).
std::vector<std::pair<std::string, IntInterval>> historical_intervals(
    const ReferenceDistribution& reference, const std::vector<std::string>& names, long long n,
    double level, long long B, std::uint64_t seed, unsigned workers = 1);

// The single interval of the uniform model: exact central binomial(n, 1/M)
// quantiles for a pool of M equiprobable names. Applied to every name.
IntInterval uniform_interval(long long pool_names, long long n, double level);

struct NameIntervalRow {
    std::string name;
    long long observed = 0;
    IntInterval hist;
    IntInterval unif;
    bool outside_hist = false;
    bool outside_unif = false;
};

struct IntervalReport {
    std::string label;
    double level = 0.95;
    long long n = 0;
    long long B = 0;
    std::uint64_t seed = 0;
    long long uniform_pool = 0;
    std::vector<NameIntervalRow> rows;
    long long n_outside_hist = 0;
    long long n_outside_unif = 0;
};

// Pure flag-and-tally step: observed[i] against hist[i] and the shared
// uniform interval. names/observed/hist must be aligned (same length,
// matching name order) or InputError is raised.
IntervalReport classify(const std::vector<std::string>& names,
                        const std::vector<long long>& observed,
                        const std::vector<std::pair<std::string, IntInterval>>& hist,
                        IntInterval unif);

// Whole-corpus driver: distinct corpus names ordered by reference count
// (descending, ties by name), historical intervals from the given
// reference, uniform band from pool_names. The caller chooses whether the
// reference has been adjusted.
IntervalReport graphical_report(const TestCorpus& corpus, const ReferenceDistribution& reference,
                                long long pool_names, double level, long long B,
                                std::uint64_t seed, unsigned workers = 1);

}  // namespace onomastat
