#include "onomastat/qualifiers.hpp"

#include <algorithm>

#include "onomastat/errors.hpp"

namespace onomastat {

std::string_view to_token(Tier t) {
    switch (t) {
        case Tier::top: return "top";
        case Tier::mid: return "mid";
        default: return "low";
    }
}

Tier tier_of(const std::string& name, const ReferenceDistribution& reference,
             const TestCorpus* exclude_corpus, TierCuts cuts) {
    if (!(cuts.top_min > cuts.mid_min && cuts.mid_min > 0))
        throw ConfigError("tier_of: need top_min > mid_min > 0");
    long long count = reference.count(name);
    if (exclude_corpus) {
        for (const auto& occ : exclude_corpus->occurrences)
            if (occ.attested && occ.name_key == name) --count;
        count = std::max<long long>(count, 0);
    }
    if (count >= cuts.top_min) return Tier::top;
    if (count >= cuts.mid_min) return Tier::mid;
    return Tier::low;
}

std::vector<QualifierRow> qualifier_table(const std::vector<TestCorpus>& corpora,
                                          const ReferenceDistribution& reference, TierCuts cuts,
                                          bool exclude_self) {
    std::vector<QualifierRow> rows;
    rows.reserve(corpora.size());
    for (const auto& corpus : corpora) {
        QualifierRow row;
        row.corpus = corpus.label;
        for (const auto& occ : corpus.occurrences) {
            if (occ.qualifier != QualifierKind::disambiguating) continue;
            ++row.total;
            switch (tier_of(occ.name_key, reference, exclude_self ? &corpus : nullptr, cuts)) {
                case Tier::top: ++row.tier_top; break;
                case Tier::mid: ++row.tier_mid; break;
                case Tier::low: ++row.tier_low; break;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace onomastat
