#include "onomastat/binomial.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "onomastat/errors.hpp"
#include "onomastat/rng.hpp"
#include "onomastat/stats.hpp"

namespace onomastat {

double binomial_tail(long long n, double p, long long k) {
    return stats::binomial_tail(n, p, k);
}

TailTestResult name_tail_test(const std::string& name, const TestCorpus& corpus,
                              const ReferenceDistribution& reference, NMode mode,
                              long long custom_n) {
    if (corpus.occurrences.empty()) throw InputError("name_tail_test: empty corpus");

    long long k = 0, n = 0;
    const ReferenceDistribution* ref = &reference;
    ReferenceDistribution adjusted;
    std::string mode_label;
    switch (mode) {
        case NMode::contested_only: {
            for (const auto& occ : corpus.occurrences) {
                if (occ.attested) continue;
                ++n;
                if (occ.name_key == name) ++k;
            }
            adjusted = adjusted_reference(reference, corpus);
            ref = &adjusted;
            mode_label = "contested";
            break;
        }
        case NMode::full_corpus: {
            n = static_cast<long long>(corpus.size());
            for (const auto& occ : corpus.occurrences)
                if (occ.name_key == name) ++k;
            mode_label = "full";
            break;
        }
        case NMode::custom: {
            if (custom_n < 1) throw ConfigError("name_tail_test: custom mode needs n >= 1");
            n = custom_n;
            for (const auto& occ : corpus.occurrences)
                if (occ.name_key == name) ++k;
            if (k > n)
                throw ConfigError("name_tail_test: custom n smaller than the observed count");
            mode_label = "custom";
            break;
        }
    }
    if (n < 1) throw InputError("name_tail_test: selected corpus slice is empty");
    if (ref->count(name) == 0)
        throw InputError("name_tail_test: name '" + name + "' is not in reference '" +
                         ref->label + "'");

    TailTestResult result;
    result.name_key = name;
    result.k_obs = k;
    result.n = n;
    result.p_name = ref->proportion(name);
    result.tail = std::max(stats::binomial_tail(n, result.p_name, k), DBL_MIN);
    result.adjusted_tail = result.tail;
    result.assumption_label =
        mode_label + "(n=" + std::to_string(n) + ", reference=" + ref->label + ")";
    return result;
}

std::vector<double> adjust(const std::vector<double>& tails, AdjustMethod method) {
    for (double t : tails)
        if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("adjust: probabilities must be in [0, 1]");
    const std::size_t m = tails.size();
    std::vector<double> out(m);
    if (m == 0) return out;

    if (method == AdjustMethod::bonferroni) {
        for (std::size_t i = 0; i < m; ++i)
            out[i] = std::min(1.0, static_cast<double>(m) * tails[i]);
        return out;
    }

    // Holm step-down: ascending order, factor (m - rank), running maximum.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return tails[a] < tails[b]; });
    double running = 0.0;
    for (std::size_t rank = 0; rank < m; ++rank) {
        double adj = std::min(1.0, static_cast<double>(m - rank) * tails[order[rank]]);
        running = std::max(running, adj);
        out[order[rank]] = running;
    }
    return out;
}

RareCountDistribution rare_count_distribution(RarePool pool, long long n, Sampling sampling,
                                              long long B, std::uint64_t seed) {
    if (pool.total < 1) throw ConfigError("rare_count_distribution: pool total must be >= 1");
    if (pool.rare < 0 || pool.rare > pool.total)
        throw ConfigError("rare_count_distribution: need 0 <= rare <= total");
    if (n < 0) throw ConfigError("rare_count_distribution: n must be >= 0");
    if (sampling == Sampling::without_replacement && n > pool.total)
        throw ConfigError("rare_count_distribution: n exceeds pool for draws without replacement");
    if (B < 0) throw ConfigError("rare_count_distribution: B must be >= 0");

    RareCountDistribution dist;
    dist.pool = pool;
    dist.sampling = sampling;
    dist.n = n;
    dist.B = B;
    dist.seed = seed;
    dist.pmf.resize(static_cast<std::size_t>(n) + 1, 0.0);
    for (long long k = 0; k <= n; ++k) {
        dist.pmf[static_cast<std::size_t>(k)] =
            sampling == Sampling::without_replacement
                ? stats::hypergeometric_pmf(pool.total, pool.rare, n, k)
                : stats::binomial_pmf(n, static_cast<double>(pool.rare) /
                                             static_cast<double>(pool.total),
                                      k);
    }
    dist.cdf.resize(dist.pmf.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < dist.pmf.size(); ++i) {
        cum += dist.pmf[i];
        dist.cdf[i] = std::min(cum, 1.0);
    }

    if (B > 0) {
        std::vector<long long> freq(dist.pmf.size(), 0);
        for (long long r = 0; r < B; ++r) {
            Pcg32 rng = substream(seed, static_cast<std::uint64_t>(r));
            long long hits = 0;
            if (sampling == Sampling::with_replacement) {
                for (long long d = 0; d < n; ++d)
                    if (rng.uniform_index(static_cast<std::uint64_t>(pool.total)) <
                        static_cast<std::uint64_t>(pool.rare))
                        ++hits;
            } else {
                long long remaining_total = pool.total, remaining_rare = pool.rare;
                for (long long d = 0; d < n; ++d) {
                    if (rng.uniform_index(static_cast<std::uint64_t>(remaining_total)) <
                        static_cast<std::uint64_t>(remaining_rare)) {
                        ++hits;
                        --remaining_rare;
                    }
                    --remaining_total;
                }
            }
            ++freq[static_cast<std::size_t>(hits)];
        }
        dist.mc_pmf.resize(freq.size());
        for (std::size_t i = 0; i < freq.size(); ++i)
            dist.mc_pmf[i] = static_cast<double>(freq[i]) / static_cast<double>(B);
    }
    return dist;
}

CalibratedPool calibrate_rare_pool(long long total, long long n, Sampling sampling,
                                   const std::vector<std::pair<long long, double>>& targets) {
    if (targets.empty()) throw ConfigError("calibrate_rare_pool: no targets");
    CalibratedPool best{0, 2.0};
    for (long long r = 0; r <= total; ++r) {
        double dev = 0.0;
        for (const auto& [threshold, target] : targets) {
            double cdf = sampling == Sampling::without_replacement
                             ? stats::hypergeometric_cdf(total, r, n, threshold)
                             : stats::binomial_cdf(
                                   n, static_cast<double>(r) / static_cast<double>(total),
                                   threshold);
            dev = std::max(dev, std::fabs(cdf - target));
            if (dev >= best.max_abs_dev) break;
        }
        if (dev < best.max_abs_dev) best = {r, dev};
    }
    return best;
}

}  // namespace onomastat
