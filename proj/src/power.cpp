#include "onomastat/power.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "onomastat/errors.hpp"
#include "onomastat/parallel.hpp"
#include "onomastat/stats.hpp"

namespace onomastat {

void Generator::index_reference() {
    std::vector<long long> weights;
    for (const auto& [name, c] : reference_.counts) {
        ref_names_.push_back(name);
        weights.push_back(c);
    }
    sampler_.emplace(weights);
}

Generator Generator::historical(ReferenceDistribution reference) {
    if (reference.counts.empty()) throw InputError("Generator: empty reference");
    Generator g;
    g.kind_ = "historical(" + reference.label + ")";
    g.reference_ = std::move(reference);
    g.weight_ = 1.0;
    g.index_reference();
    return g;
}

Generator Generator::uniform(std::vector<std::string> pool) {
    if (pool.empty()) throw ConfigError("Generator: uniform pool must be nonempty");
    Generator g;
    g.kind_ = "uniform(M=" + std::to_string(pool.size()) + ")";
    g.pool_ = std::move(pool);
    g.weight_ = 0.0;
    return g;
}

Generator Generator::mixture(ReferenceDistribution reference, std::vector<std::string> pool,
                             double historical_weight) {
    if (!(historical_weight >= 0.0 && historical_weight <= 1.0))
        throw ConfigError("Generator: mixture weight must be in [0, 1]");
    if (reference.counts.empty()) throw InputError("Generator: empty reference");
    if (pool.empty()) throw ConfigError("Generator: uniform pool must be nonempty");
    Generator g;
    g.kind_ = "mixture(" + reference.label + ", M=" + std::to_string(pool.size()) +
              ", w=" + std::to_string(historical_weight) + ")";
    g.reference_ = std::move(reference);
    g.pool_ = std::move(pool);
    g.weight_ = historical_weight;
    g.index_reference();
    return g;
}

TestCorpus Generator::generate(long long n, Pcg32& rng) const {
    if (n < 1) throw ConfigError("Generator: n must be >= 1");
    // One shared path: a weight coin, then the chosen branch. With weight 1
    // the coin is always below, with weight 0 never, so the mixture
    // endpoints consume randomness identically to the pure generators.
    TestCorpus corpus;
    corpus.label = kind_;
    corpus.occurrences.reserve(static_cast<std::size_t>(n));
    for (long long d = 0; d < n; ++d) {
        double u = rng.next_double();
        Occurrence occ;
        if (u < weight_)
            occ.name_key = ref_names_[(*sampler_)(rng)];
        else
            occ.name_key = pool_[rng.uniform_index(pool_.size())];
        corpus.occurrences.push_back(std::move(occ));
    }
    return corpus;
}

TestCorpus Generator::generate(long long n, std::uint64_t seed) const {
    Pcg32 rng = substream(seed, 0);
    return generate(n, rng);
}

std::string Generator::describe() const { return kind_; }

std::string_view to_token(TestMethod m) {
    switch (m) {
        case TestMethod::gof_chi2: return "gof_chi2";
        case TestMethod::interval_overlap: return "interval_overlap";
        default: return "binomial_single_name";
    }
}

namespace {

// Smallest q >= -1 with P(Binomial(m, p_out) > q) <= alpha.
long long outside_critical(long long m, double p_out, double alpha) {
    for (long long q = -1; q < m; ++q) {
        double exceed = 1.0 - stats::binomial_cdf(m, p_out, q);
        if (exceed <= alpha) return q;
    }
    return m;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t r = v.size();
    if (r == 0) return 0.0;
    return r % 2 ? v[r / 2] : (v[r / 2 - 1] + v[r / 2]) / 2.0;
}

}  // namespace

PowerResult rejection_rate(TestMethod method, const Generator& gen,
                           const ReferenceDistribution& reference, long long n, double alpha,
                           long long reps, std::uint64_t seed, const MethodConfig& cfg,
                           unsigned workers) {
    if (reps < 1) throw ConfigError("rejection_rate: reps must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("rejection_rate: alpha in [0, 1]");

    // Method-specific setup, done once.
    BinLayout layout;
    std::vector<double> expected;
    std::map<std::string, IntInterval> intervals;
    double p_target = 0.0;
    if (method == TestMethod::gof_chi2) {
        layout = make_bins(reference, n, cfg.binning);
        expected = layout.expected();
    } else if (method == TestMethod::interval_overlap) {
        std::vector<std::string> all_names;
        for (const auto& [name, c] : reference.counts) all_names.push_back(name);
        auto built = historical_intervals(reference, all_names, n, cfg.interval_level,
                                          cfg.interval_B, derive_seed(seed, "intervals"),
                                          workers);
        for (auto& [name, iv] : built) intervals.emplace(name, iv);
    } else {
        if (cfg.target_name.empty())
            throw ConfigError("rejection_rate: binomial_single_name needs a target name");
        if (reference.count(cfg.target_name) == 0)
            throw InputError("rejection_rate: target name '" + cfg.target_name +
                             "' is not in the reference");
        p_target = reference.proportion(cfg.target_name);
    }

    const std::uint64_t rep_seed = derive_seed(seed, "reps");
    unsigned chunks = chunk_count(static_cast<std::size_t>(reps), workers);
    std::vector<long long> rejected(chunks, 0);
    run_chunked(static_cast<std::size_t>(reps), workers,
                [&](std::size_t lo, std::size_t hi, unsigned slot) {
                    for (std::size_t r = lo; r < hi; ++r) {
                        Pcg32 rng = substream(rep_seed, r);
                        TestCorpus corpus = gen.generate(n, rng);
                        bool reject = false;
                        switch (method) {
                            case TestMethod::gof_chi2: {
                                auto obs = observed_bin_counts(corpus, layout);
                                double stat = chi2_statistic(obs, expected);
                                double p = stats::chi2_sf(
                                    stat, static_cast<int>(layout.bins.size()) - 1);
                                reject = p <= alpha;
                                break;
                            }
                            case TestMethod::interval_overlap: {
                                auto counts = corpus.name_counts();
                                long long outside = 0;
                                for (const auto& [name, c] : counts) {
                                    auto it = intervals.find(name);
                                    // Names outside the reference have the
                                    // degenerate interval [0, 0].
                                    IntInterval iv =
                                        it == intervals.end() ? IntInterval{0, 0} : it->second;
                                    if (!iv.contains(c)) ++outside;
                                }
                                long long crit = outside_critical(
                                    static_cast<long long>(counts.size()),
                                    1.0 - cfg.interval_level, alpha);
                                reject = outside > crit;
                                break;
                            }
                            case TestMethod::binomial_single_name: {
                                long long k = 0;
                                for (const auto& occ : corpus.occurrences)
                                    if (occ.name_key == cfg.target_name) ++k;
                                reject = stats::binomial_tail(n, p_target, k) <= alpha;
                                break;
                            }
                        }
                        if (reject) ++rejected[slot];
                    }
                });
    long long total_rejected = 0;
    for (long long r : rejected) total_rejected += r;

    PowerResult result;
    result.method = method;
    result.generator = gen.describe();
    result.n = n;
    result.alpha = alpha;
    result.reps = reps;
    result.rejection_rate = static_cast<double>(total_rejected) / static_cast<double>(reps);
    result.seed = seed;
    return result;
}

std::vector<WidthRow> ci_width_scaling(const ReferenceDistribution& reference,
                                       const std::string& name,
                                       const std::vector<long long>& sizes, double level,
                                       long long B, std::uint64_t seed, unsigned workers) {
    if (sizes.empty()) throw ConfigError("ci_width_scaling: no sizes given");
    std::vector<WidthRow> rows;
    for (long long n : sizes) {
        auto built = historical_intervals(reference, {name}, n, level, B,
                                          derive_seed(seed, "n=" + std::to_string(n)), workers);
        WidthRow row;
        row.n = n;
        row.interval = built[0].second;
        row.width = row.interval.hi - row.interval.lo;
        row.width_over_n = static_cast<double>(row.width) / static_cast<double>(n);
        row.width_over_sqrt_n =
            static_cast<double>(row.width) / std::sqrt(static_cast<double>(n));
        rows.push_back(row);
    }
    return rows;
}

SubsampleSummary subsample_experiment(const TestCorpus& corpus, long long n_sub, long long reps,
                                      const ReferenceDistribution& reference, TestMethod method,
                                      std::uint64_t seed, const MethodConfig& cfg,
                                      unsigned workers) {
    const long long n = static_cast<long long>(corpus.size());
    if (n_sub < 1 || n_sub > n)
        throw ConfigError("subsample_experiment: need 1 <= n_sub <= corpus size");
    if (reps < 1) throw ConfigError("subsample_experiment: reps must be >= 1");
    if (method == TestMethod::binomial_single_name)
        throw ConfigError("subsample_experiment: unsupported method");

    SubsampleSummary summary;
    summary.method = method;
    summary.n_sub = n_sub;
    summary.reps = reps;
    summary.seed = seed;

    BinLayout layout;
    std::vector<double> expected;
    IntInterval unif;
    if (method == TestMethod::gof_chi2) {
        layout = make_bins(reference, n_sub, cfg.binning);
        expected = layout.expected();
    } else {
        summary.uniform_pool = cfg.uniform_pool > 0
                                   ? cfg.uniform_pool
                                   : static_cast<long long>(reference.counts.size());
        unif = uniform_interval(summary.uniform_pool, n_sub, cfg.interval_level);
    }

    unsigned chunks = chunk_count(static_cast<std::size_t>(reps), workers);
    std::vector<std::vector<double>> p_chunks(chunks);
    std::vector<long long> inside_chunks(chunks, 0);
    // per-rep share of names inside the band, kept in replicate order so the
    // final sum is identical for any worker count
    std::vector<std::vector<double>> frac_chunks(chunks);
    run_chunked(static_cast<std::size_t>(reps), workers,
                [&](std::size_t lo, std::size_t hi, unsigned slot) {
                    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
                    for (std::size_t r = lo; r < hi; ++r) {
                        Pcg32 rng = substream(seed, r);
                        // partial Fisher-Yates: first n_sub entries
                        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
                        for (long long i = 0; i < n_sub; ++i) {
                            std::size_t j = static_cast<std::size_t>(i) +
                                            rng.uniform_index(static_cast<std::uint64_t>(n - i));
                            std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
                        }
                        if (method == TestMethod::gof_chi2) {
                            std::vector<long long> obs(layout.bins.size(), 0);
                            for (long long i = 0; i < n_sub; ++i) {
                                const auto& name =
                                    corpus.occurrences[idx[static_cast<std::size_t>(i)]].name_key;
                                auto it = layout.name_to_bin.find(name);
                                ++obs[it == layout.name_to_bin.end() ? layout.rare_bin
                                                                     : it->second];
                            }
                            double stat = chi2_statistic(obs, expected);
                            p_chunks[slot].push_back(stats::chi2_sf(
                                stat, static_cast<int>(layout.bins.size()) - 1));
                        } else {
                            std::map<std::string, long long> counts;
                            for (long long i = 0; i < n_sub; ++i)
                                ++counts[corpus.occurrences[idx[static_cast<std::size_t>(i)]]
                                             .name_key];
                            long long inside = 0;
                            for (const auto& [name, c] : counts) inside += unif.contains(c);
                            if (inside == static_cast<long long>(counts.size()))
                                ++inside_chunks[slot];
                            frac_chunks[slot].push_back(static_cast<double>(inside) /
                                                        static_cast<double>(counts.size()));
                        }
                    }
                });

    if (method == TestMethod::gof_chi2) {
        for (auto& pc : p_chunks)
            summary.p_values.insert(summary.p_values.end(), pc.begin(), pc.end());
        summary.median_p = median_of(summary.p_values);
        long long rejects = 0;
        for (double p : summary.p_values) rejects += p <= 0.05;
        summary.reject_rate_05 =
            static_cast<double>(rejects) / static_cast<double>(summary.p_values.size());
    } else {
        long long inside = 0;
        for (long long i : inside_chunks) inside += i;
        summary.frac_all_inside_uniform =
            static_cast<double>(inside) / static_cast<double>(reps);
        double sum = 0.0;
        for (const auto& fc : frac_chunks)
            for (double f : fc) sum += f;
        summary.mean_frac_names_inside_uniform = sum / static_cast<double>(reps);
    }
    return summary;
}

}  // namespace onomastat
