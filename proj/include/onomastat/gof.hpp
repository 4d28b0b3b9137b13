#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "onomastat/corpus.hpp"

namespace onomastat {

enum class PoolPolicy { pool_into_other, pool_ascending };

struct BinningSpec {
    int top_k = 12;                // most-popular reference names kept as individual bins
    long long rare_threshold = 1;  // reference count <= threshold -> rare bin
    double min_expected = 5.0;     // bins below this expected count get pooled
    PoolPolicy pool_policy = PoolPolicy::pool_ascending;
};

struct Bin {
    std::string label;
    std::vector<std::string> names;  // member reference names
    long long weight = 0;            // summed reference counts
};

// Bin layout for one (reference, corpus size, spec) triple. Every reference
// name maps to exactly one bin; corpus names absent from the reference fall
// into rare_bin (reference count 0 is rare by definition).
struct BinLayout {
    std::vector<Bin> bins;
    long long reference_total = 0;
    long long corpus_size = 0;
    std::map<std::string, std::size_t> name_to_bin;
    std::size_t rare_bin = 0;

    std::vector<double> expected() const;  // corpus_size * weight / total per bin
    std::vector<long long> weights() const;
};

// Builds top_k individual bins (by reference count, ties by name), one rare
// bin, one catch-all "other" bin, then pools bins whose expected count falls
// below spec.min_expected:
//   pool_ascending   — repeatedly merge the smallest-expected bin into the
//                      next smallest (ties by label) until all pass;
//   pool_into_other  — merge every failing bin into "other" first, then
//                      finish ascending if "other" itself still fails.
// Fewer than two feasible bins raises ConfigError.
BinLayout make_bins(const ReferenceDistribution& reference, long long n, const BinningSpec& spec);

// Pearson statistic sum((O-E)^2 / E). Sizes must match; expected all > 0.
double chi2_statistic(std::span<const long long> observed, std::span<const double> expected);

std::vector<long long> observed_bin_counts(const TestCorpus& corpus, const BinLayout& layout);

struct GofResult {
    std::string label;
    double statistic = 0.0;
    int dof = 0;
    double p_asymptotic = 1.0;
    std::optional<double> p_monte_carlo;  // absent when B == 0
    long long B = 0;
    std::uint64_t seed = 0;
    struct BinDetail {
        std::string label;
        long long observed = 0;
        double expected = 0.0;
    };
    std::vector<BinDetail> bins;
};

// Chi-squared goodness-of-fit of a corpus against a reference distribution.
// The Monte Carlo p-value (B > 0) redraws n occurrences from the reference
// bin proportions per replicate and uses the add-one estimator
// (1 + #{T_rep >= T_obs}) / (B + 1), so it is never exactly zero.
// Replicate randomness is keyed by (seed, replicate index): results are
// bit-identical for any worker count.
GofResult gof_test(const TestCorpus& corpus, const ReferenceDistribution& reference,
                   const BinningSpec& spec, long long B, std::uint64_t seed,
                   unsigned workers = 1);

}  // namespace onomastat
