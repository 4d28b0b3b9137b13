#include "onomastat/intervals.hpp"

#include <algorithm>

#include "onomastat/errors.hpp"
#include "onomastat/parallel.hpp"
#include "onomastat/rng.hpp"
#include "onomastat/stats.hpp"

namespace onomastat {

namespace {

void check_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw ConfigError("interval level must be in (0, 1)");
}

}  // namespace

std::vector<std::pair<std::string, IntInterval>> historical_intervals(
    const ReferenceDistribution& reference, const std::vector<std::string>& names, long long n,
    double level, long long B, std::uint64_t seed, unsigned workers) {
    check_level(level);
    if (n < 1) throw ConfigError("historical_intervals: n must be >= 1");
    if (B < 1) throw ConfigError("historical_intervals: B must be >= 1");
    if (names.empty()) throw InputError("historical_intervals: no names given");

    // Slot per tracked name; every reference name gets a sampler index.
    std::vector<long long> weights;
    std::vector<int> slot_of;  // reference index -> tracked slot or -1
    weights.reserve(reference.counts.size());
    slot_of.reserve(reference.counts.size());
    std::map<std::string, int> slot_by_name;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (reference.count(names[i]) == 0)
            throw InputError("historical_intervals: name '" + names[i] +
                             "' is not in the reference support");
        if (!slot_by_name.emplace(names[i], static_cast<int>(i)).second)
            throw InputError("historical_intervals: duplicate name '" + names[i] + "'");
    }
    for (const auto& [name, c] : reference.counts) {
        weights.push_back(c);
        auto it = slot_by_name.find(name);
        slot_of.push_back(it == slot_by_name.end() ? -1 : it->second);
    }
    WeightedIndexSampler sampler(weights);

    // Per-slot histogram of the name's count across replicates.
    const std::size_t hist_width = static_cast<std::size_t>(n) + 1;
    unsigned chunks = chunk_count(static_cast<std::size_t>(B), workers);
    std::vector<std::vector<std::uint64_t>> hist(
        chunks, std::vector<std::uint64_t>(names.size() * hist_width, 0));
    run_chunked(static_cast<std::size_t>(B), workers,
                [&](std::size_t lo, std::size_t hi, unsigned slot) {
                    std::vector<long long> counts(names.size());
                    auto& h = hist[slot];
                    for (std::size_t r = lo; r < hi; ++r) {
                        Pcg32 rng = substream(seed, r);
                        std::fill(counts.begin(), counts.end(), 0);
                        for (long long d = 0; d < n; ++d) {
                            int s = slot_of[sampler(rng)];
                            if (s >= 0) ++counts[static_cast<std::size_t>(s)];
                        }
                        for (std::size_t i = 0; i < counts.size(); ++i)
                            ++h[i * hist_width + static_cast<std::size_t>(counts[i])];
                    }
                });
    for (unsigned c = 1; c < chunks; ++c)
        for (std::size_t i = 0; i < hist[0].size(); ++i) hist[0][i] += hist[c][i];

    const double lo_target = (1.0 - level) / 2.0 * static_cast<double>(B);
    const double hi_target = (1.0 + level) / 2.0 * static_cast<double>(B);
    std::vector<std::pair<std::string, IntInterval>> out;
    out.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::uint64_t cum = 0;
        IntInterval iv{-1, -1};
        for (long long c = 0; c <= n; ++c) {
            cum += hist[0][i * hist_width + static_cast<std::size_t>(c)];
            if (iv.lo < 0 && static_cast<double>(cum) >= lo_target) iv.lo = c;
            if (iv.hi < 0 && static_cast<double>(cum) >= hi_target) {
                iv.hi = c;
                break;
            }
        }
        out.emplace_back(names[i], iv);
    }
    return out;
}

IntInterval uniform_interval(long long pool_names, long long n, double level) {
    check_level(level);
    if (pool_names < 1) throw ConfigError("uniform_interval: pool size must be >= 1");
    if (n < 1) throw ConfigError("uniform_interval: n must be >= 1");
    double p = 1.0 / static_cast<double>(pool_names);
    double alpha2 = (1.0 - level) / 2.0;
    return {stats::binomial_quantile(n, p, alpha2),
            stats::binomial_quantile(n, p, 1.0 - alpha2)};
}

IntervalReport classify(const std::vector<std::string>& names,
                        const std::vector<long long>& observed,
                        const std::vector<std::pair<std::string, IntInterval>>& hist,
                        IntInterval unif) {
    if (names.size() != observed.size() || names.size() != hist.size())
        throw InputError("classify: misaligned inputs");
    IntervalReport report;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (hist[i].first != names[i])
            throw InputError("classify: interval list does not match name list at '" +
                             names[i] + "'");
        NameIntervalRow row;
        row.name = names[i];
        row.observed = observed[i];
        row.hist = hist[i].second;
        row.unif = unif;
        row.outside_hist = !row.hist.contains(row.observed);
        row.outside_unif = !row.unif.contains(row.observed);
        report.n_outside_hist += row.outside_hist;
        report.n_outside_unif += row.outside_unif;
        report.rows.push_back(std::move(row));
    }
    return report;
}

IntervalReport graphical_report(const TestCorpus& corpus, const ReferenceDistribution& reference,
                                long long pool_names, double level, long long B,
                                std::uint64_t seed, unsigned workers) {
    if (corpus.occurrences.empty()) throw InputError("graphical_report: empty corpus");
    auto counts = corpus.name_counts();
    std::sort(counts.begin(), counts.end(), [&](const auto& a, const auto& b) {
        long long ra = reference.count(a.first), rb = reference.count(b.first);
        if (ra != rb) return ra > rb;
        return a.first < b.first;
    });
    std::vector<std::string> names;
    std::vector<long long> observed;
    for (const auto& [name, c] : counts) {
        names.push_back(name);
        observed.push_back(c);
    }
    long long n = static_cast<long long>(corpus.size());
    auto hist = historical_intervals(reference, names, n, level, B, seed, workers);
    IntInterval unif = uniform_interval(pool_names, n, level);
    IntervalReport report = classify(names, observed, hist, unif);
    report.label = corpus.label + " vs " + reference.label;
    report.level = level;
    report.n = n;
    report.B = B;
    report.seed = seed;
    report.uniform_pool = pool_names;
    return report;
}

}  // namespace onomastat
