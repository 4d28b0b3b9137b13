#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "onomastat/corpus.hpp"
#include "onomastat/gof.hpp"
#include "onomastat/intervals.hpp"
#include "onomastat/rng.hpp"

namespace onomastat {

// Draws corpora i.i.d. from a known name distribution: the historical
// reference, a uniform pool of equiprobable names, or a per-occurrence
// mixture of the two. Weight endpoints reproduce the pure generators
// bit-for-bit (one shared draw path).
class Generator {
public:
    static Generator historical(ReferenceDistribution reference);
    static Generator uniform(std::vector<std::string> pool);
    static Generator mixture(ReferenceDistribution reference, std::vector<std::string> pool,
                             double historical_weight);

    TestCorpus generate(long long n, Pcg32& rng) const;
    TestCorpus generate(long long n, std::uint64_t seed) const;
    std::string describe() const;

private:
    Generator() = default;
    void index_reference();
    std::string kind_;
    ReferenceDistribution reference_;
    std::vector<std::string> ref_names_;  // aligned with sampler weights
    std::vector<std::string> pool_;
    double weight_ = 1.0;  // P(draw from the historical reference)
    std::optional<WeightedIndexSampler> sampler_;
};

enum class TestMethod { gof_chi2, interval_overlap, binomial_single_name };

std::string_view to_token(TestMethod m);

struct MethodConfig {
    BinningSpec binning;            // gof_chi2
    double interval_level = 0.95;   // interval_overlap: per-name CI level
    long long interval_B = 10000;   // interval_overlap: CI construction replicates
    long long uniform_pool = 0;     // subsample band; 0 = # distinct reference names
    std::string target_name;        // binomial_single_name
};

struct PowerResult {
    TestMethod method = TestMethod::gof_chi2;
    std::string generator;
    long long n = 0;
    double alpha = 0.05;
    long long reps = 0;
    double rejection_rate = 0.0;
    std::uint64_t seed = 0;
};

// Fraction of generated corpora the method rejects at alpha, with the
// historical reference as the null. Rules:
//   gof_chi2             — asymptotic p <= alpha;
//   interval_overlap     — #names outside their historical intervals
//                          exceeds c(alpha), the smallest q >= -1 with
//                          P(Binomial(m, 1-level) > q) <= alpha (at
//                          alpha=.05 this is the 95th percentile rule);
//   binomial_single_name — upper tail of the target name's count <= alpha.
PowerResult rejection_rate(TestMethod method, const Generator& gen,
                           const ReferenceDistribution& reference, long long n, double alpha,
                           long long reps, std::uint64_t seed, const MethodConfig& cfg = {},
                           unsigned workers = 1);

struct WidthRow {
    long long n = 0;
    IntInterval interval;
    long long width = 0;            // hi - lo, count scale
    double width_over_n = 0.0;      // proportion scale; ~ 1/sqrt(n)
    double width_over_sqrt_n = 0.0; // ~ constant across n
};

// Historical-interval width for one name across sample sizes.
std::vector<WidthRow> ci_width_scaling(const ReferenceDistribution& reference,
                                       const std::string& name,
                                       const std::vector<long long>& sizes, double level,
                                       long long B, std::uint64_t seed, unsigned workers = 1);

struct SubsampleSummary {
    TestMethod method = TestMethod::gof_chi2;
    long long n_sub = 0;
    long long reps = 0;
    std::uint64_t seed = 0;
    // gof_chi2
    std::vector<double> p_values;
    double median_p = 0.0;
    double reject_rate_05 = 0.0;
    // interval_overlap: how the subsampled counts sit against the uniform band
    long long uniform_pool = 0;
    double frac_all_inside_uniform = 0.0;       // reps where every name fits the band
    double mean_frac_names_inside_uniform = 0;  // mean per-rep share of names inside
};

// Repeatedly subsamples n_sub occurrences without replacement and runs the
// method on each subsample.
SubsampleSummary subsample_experiment(const TestCorpus& corpus, long long n_sub, long long reps,
                                      const ReferenceDistribution& reference, TestMethod method,
                                      std::uint64_t seed, const MethodConfig& cfg = {},
                                      unsigned workers = 1);

}  // namespace onomastat
