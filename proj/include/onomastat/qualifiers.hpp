#pragma once

#include <string>
#include <vector>

#include "onomastat/corpus.hpp"

namespace onomastat {

enum class Tier { top, mid, low };

std::string_view to_token(Tier t);

// Popularity-tier boundaries on reference counts: count >= top_min -> top,
// count >= mid_min -> mid, else low.
struct TierCuts {
    long long top_min = 102;
    long long mid_min = 6;
};

// Tier of a name by its reference count. When exclude_corpus is given, that
// corpus's own attested occurrences of the name are subtracted first (the
// independence adjustment), clamped at zero. A name absent from the
// reference has count 0 and tiers low.
Tier tier_of(const std::string& name, const ReferenceDistribution& reference,
             const TestCorpus* exclude_corpus = nullptr, TierCuts cuts = {});

struct QualifierRow {
    std::string corpus;
    long long total = 0;
    long long tier_top = 0;
    long long tier_mid = 0;
    long long tier_low = 0;
};

// Counts disambiguating qualifiers per corpus, split by the qualified
// name's popularity tier. Title qualifiers are not counted. With
// exclude_self, each corpus's own attested occurrences are removed from
// the reference count before tiering.
std::vector<QualifierRow> qualifier_table(const std::vector<TestCorpus>& corpora,
                                          const ReferenceDistribution& reference,
                                          TierCuts cuts = {}, bool exclude_self = true);

}  // namespace onomastat
