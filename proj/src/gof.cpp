#include "onomastat/gof.hpp"

#include <algorithm>
#include <cmath>

#include "onomastat/errors.hpp"
#include "onomastat/parallel.hpp"
#include "onomastat/rng.hpp"
#include "onomastat/stats.hpp"

namespace onomastat {

std::vector<double> BinLayout::expected() const {
    std::vector<double> out;
    out.reserve(bins.size());
    for (const auto& b : bins)
        out.push_back(static_cast<double>(corpus_size) * static_cast<double>(b.weight) /
                      static_cast<double>(reference_total));
    return out;
}

std::vector<long long> BinLayout::weights() const {
    std::vector<long long> out;
    out.reserve(bins.size());
    for (const auto& b : bins) out.push_back(b.weight);
    return out;
}

namespace {

struct WorkBin {
    Bin bin;
    bool alive = true;
    std::size_t merged_into = 0;
};

double expected_of(const WorkBin& w, long long n, long long total) {
    return static_cast<double>(n) * static_cast<double>(w.bin.weight) /
           static_cast<double>(total);
}

std::size_t resolve(const std::vector<WorkBin>& work, std::size_t i) {
    while (!work[i].alive) i = work[i].merged_into;
    return i;
}

void merge_into(std::vector<WorkBin>& work, std::size_t from, std::size_t into) {
    WorkBin& dst = work[into];
    WorkBin& src = work[from];
    if (src.bin.weight > 0 && dst.bin.weight > 0)
        dst.bin.label = dst.bin.label + "+" + src.bin.label;
    else if (dst.bin.weight == 0 && src.bin.weight > 0)
        dst.bin.label = src.bin.label;
    dst.bin.weight += src.bin.weight;
    dst.bin.names.insert(dst.bin.names.end(), src.bin.names.begin(), src.bin.names.end());
    src.alive = false;
    src.merged_into = into;
    src.bin.names.clear();
}

std::size_t alive_count(const std::vector<WorkBin>& work) {
    std::size_t n = 0;
    for (const auto& w : work) n += w.alive;
    return n;
}

// Alive bin indices in ascending (expected, label) order.
std::vector<std::size_t> ascending_order(const std::vector<WorkBin>& work, long long n,
                                         long long total) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < work.size(); ++i)
        if (work[i].alive) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        double ea = expected_of(work[a], n, total), eb = expected_of(work[b], n, total);
        if (ea != eb) return ea < eb;
        return work[a].bin.label < work[b].bin.label;
    });
    return idx;
}

void pool_ascending(std::vector<WorkBin>& work, long long n, long long total,
                    double min_expected) {
    for (;;) {
        auto order = ascending_order(work, n, total);
        if (expected_of(work[order[0]], n, total) >= min_expected) return;
        if (order.size() <= 2)
            throw ConfigError(
                "make_bins: cannot reach 2 bins with expected >= min_expected");
        merge_into(work, order[0], order[1]);
    }
}

}  // namespace

BinLayout make_bins(const ReferenceDistribution& reference, long long n,
                    const BinningSpec& spec) {
    if (reference.counts.empty()) throw InputError("make_bins: empty reference");
    if (n < 1) throw ConfigError("make_bins: corpus size must be >= 1");
    if (spec.top_k < 0) throw ConfigError("make_bins: top_k must be >= 0");
    if (!(spec.min_expected > 0.0)) throw ConfigError("make_bins: min_expected must be > 0");
    if (spec.rare_threshold < 0) throw ConfigError("make_bins: rare_threshold must be >= 0");

    std::vector<std::pair<std::string, long long>> eligible;  // non-rare
    Bin rare{"rare", {}, 0};
    for (const auto& [name, c] : reference.counts) {
        if (c <= spec.rare_threshold) {
            rare.names.push_back(name);
            rare.weight += c;
        } else {
            eligible.emplace_back(name, c);
        }
    }
    std::sort(eligible.begin(), eligible.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::vector<WorkBin> work;
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(spec.top_k), eligible.size());
    for (std::size_t i = 0; i < k; ++i)
        work.push_back({Bin{eligible[i].first, {eligible[i].first}, eligible[i].second}, true, 0});
    Bin other{"other", {}, 0};
    for (std::size_t i = k; i < eligible.size(); ++i) {
        other.names.push_back(eligible[i].first);
        other.weight += eligible[i].second;
    }
    std::size_t other_index = work.size();
    work.push_back({std::move(other), true, 0});
    std::size_t rare_index = work.size();
    work.push_back({std::move(rare), true, 0});

    const long long total = reference.total;
    if (spec.pool_policy == PoolPolicy::pool_into_other) {
        for (auto idx : ascending_order(work, n, total)) {
            if (idx == other_index) continue;
            if (expected_of(work[idx], n, total) < spec.min_expected) {
                // merging into "other" keeps its label
                std::string keep = work[other_index].bin.label;
                merge_into(work, idx, other_index);
                work[other_index].bin.label = keep;
            }
        }
    }
    pool_ascending(work, n, total, spec.min_expected);

    if (alive_count(work) < 2)
        throw ConfigError("make_bins: fewer than 2 bins remain");

    BinLayout layout;
    layout.reference_total = total;
    layout.corpus_size = n;
    std::vector<std::size_t> final_index(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) {
        if (!work[i].alive) continue;
        final_index[i] = layout.bins.size();
        layout.bins.push_back(work[i].bin);
    }
    for (std::size_t i = 0; i < work.size(); ++i)
        if (!work[i].alive) final_index[i] = final_index[resolve(work, i)];
    layout.rare_bin = final_index[rare_index];
    for (std::size_t b = 0; b < layout.bins.size(); ++b)
        for (const auto& name : layout.bins[b].names) layout.name_to_bin.emplace(name, b);
    return layout;
}

double chi2_statistic(std::span<const long long> observed, std::span<const double> expected) {
    if (observed.size() != expected.size())
        throw ConfigError("chi2_statistic: observed/expected size mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0))
            throw ConfigError("chi2_statistic: expected counts must be > 0");
        double d = static_cast<double>(observed[i]) - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

std::vector<long long> observed_bin_counts(const TestCorpus& corpus, const BinLayout& layout) {
    std::vector<long long> obs(layout.bins.size(), 0);
    for (const auto& occ : corpus.occurrences) {
        auto it = layout.name_to_bin.find(occ.name_key);
        std::size_t b = it == layout.name_to_bin.end() ? layout.rare_bin : it->second;
        ++obs[b];
    }
    return obs;
}

GofResult gof_test(const TestCorpus& corpus, const ReferenceDistribution& reference,
                   const BinningSpec& spec, long long B, std::uint64_t seed,
                   unsigned workers) {
    if (corpus.occurrences.empty()) throw InputError("gof_test: empty corpus");
    if (B < 0) throw ConfigError("gof_test: B must be >= 0");

    const long long n = static_cast<long long>(corpus.size());
    BinLayout layout = make_bins(reference, n, spec);
    std::vector<long long> obs = observed_bin_counts(corpus, layout);
    std::vector<double> exp = layout.expected();
    double stat = chi2_statistic(obs, exp);
    int dof = static_cast<int>(layout.bins.size()) - 1;

    GofResult result;
    result.label = corpus.label + " vs " + reference.label;
    result.statistic = stat;
    result.dof = dof;
    result.p_asymptotic = stats::chi2_sf(stat, dof);
    result.B = B;
    result.seed = seed;
    for (std::size_t i = 0; i < layout.bins.size(); ++i)
        result.bins.push_back({layout.bins[i].label, obs[i], exp[i]});

    if (B > 0) {
        WeightedIndexSampler sampler(layout.weights());
        std::uint64_t mc_seed = derive_seed(seed, "gof-mc");
        unsigned chunks = chunk_count(static_cast<std::size_t>(B), workers);
        std::vector<long long> exceed(chunks, 0);
        run_chunked(static_cast<std::size_t>(B), workers,
                    [&](std::size_t lo, std::size_t hi, unsigned slot) {
                        std::vector<long long> counts(layout.bins.size());
                        for (std::size_t r = lo; r < hi; ++r) {
                            Pcg32 rng = substream(mc_seed, r);
                            std::fill(counts.begin(), counts.end(), 0);
                            for (long long d = 0; d < n; ++d) ++counts[sampler(rng)];
                            if (chi2_statistic(counts, exp) >= stat) ++exceed[slot];
                        }
                    });
        long long k = 0;
        for (long long e : exceed) k += e;
        result.p_monte_carlo = static_cast<double>(1 + k) / static_cast<double>(B + 1);
    }
    return result;
}

}  // namespace onomastat
