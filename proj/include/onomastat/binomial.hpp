#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onomastat/corpus.hpp"

namespace onomastat {

// Which corpus slice and reference the tail test assumes. contested_only
// uses the contested occurrences and the adjusted reference; full_corpus
// uses every occurrence and the raw reference; custom keeps k from the
// full corpus but substitutes an explicit n.
enum class NMode { contested_only, full_corpus, custom };

struct TailTestResult {
    std::string name_key;
    long long k_obs = 0;
    long long n = 0;
    double p_name = 0.0;          // reference proportion under the assumption
    double tail = 1.0;            // P(X >= k_obs), floored at DBL_MIN
    double adjusted_tail = 1.0;   // == tail for a single test
    std::string assumption_label;
};

// Exact upper binomial tail; see stats::binomial_tail.
double binomial_tail(long long n, double p, long long k);

// Per-name tail test under the selected assumption. The name must be in
// the selected reference's support.
TailTestResult name_tail_test(const std::string& name, const TestCorpus& corpus,
                              const ReferenceDistribution& reference, NMode mode,
                              long long custom_n = 0);

enum class AdjustMethod { bonferroni, holm };

// Multiple-testing adjustment of a family of tail probabilities. Bonferroni
// min(1, m*p); Holm step-down. Output order matches input order; adjusted
// values are always >= raw.
std::vector<double> adjust(const std::vector<double>& tails, AdjustMethod method);

enum class Sampling { with_replacement, without_replacement };

struct RarePool {
    long long total = 0;  // N occurrences in the pool
    long long rare = 0;   // R of them belong to rare names (one occurrence each)
};

struct RareCountDistribution {
    std::vector<double> pmf;  // support 0..n
    std::vector<double> cdf;
    RarePool pool;
    Sampling sampling = Sampling::without_replacement;
    long long n = 0;
    long long B = 0;  // 0 = exact only
    std::uint64_t seed = 0;
    std::vector<double> mc_pmf;  // empty unless B > 0
};

// Sampling distribution of the rare-name count in a sample of n occurrences
// from the pool. Each rare name contributes exactly one pool occurrence, so
// without replacement the count is hypergeometric; with replacement it is
// binomial(n, R/N). B > 0 adds a Monte Carlo cross-check histogram.
RareCountDistribution rare_count_distribution(RarePool pool, long long n, Sampling sampling,
                                              long long B = 0, std::uint64_t seed = 0);

struct CalibratedPool {
    long long rare = 0;
    double max_abs_dev = 0.0;  // worst |cdf - target| at the calibrated R
};

// Finds the rare-occurrence count R in [0, N] whose exact distribution
// best matches target cumulative probabilities (threshold, probability),
// minimizing the maximum absolute deviation.
CalibratedPool calibrate_rare_pool(long long total, long long n, Sampling sampling,
                                   const std::vector<std::pair<long long, double>>& targets);

}  // namespace onomastat
