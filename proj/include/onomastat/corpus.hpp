#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace onomastat {

enum class Gender { male, female, unknown };
enum class Region { palestine, diaspora, unknown };
enum class SourceType { ossuary, inscription_papyri, literary };
enum class QualifierKind { disambiguating, title };

std::string_view to_token(Gender g);
std::string_view to_token(Region r);
std::string_view to_token(SourceType s);
std::string_view to_token(QualifierKind q);
Gender gender_from_token(std::string_view tok, const std::string& context);
Region region_from_token(std::string_view tok, const std::string& context);
SourceType source_type_from_token(std::string_view tok, const std::string& context);

// One attested name occurrence from the lexicon, carrying the metadata the
// inclusion criteria filter on. Years use astronomical numbering
// (4 BCE = -3, 73 CE = 73).
struct LexiconRecord {
    std::string record_id;
    std::string name_key;  // canonical form, post-normalization
    std::string raw_form;  // form as attested
    Gender gender = Gender::unknown;
    Region region = Region::unknown;
    int date_lo = 0;
    int date_hi = 0;
    SourceType source_type = SourceType::literary;
    bool fictitious = false;
    std::string excluded_reason;  // nonempty = curator flagged this row for removal
};

struct InclusionCriteria {
    std::optional<Gender> gender_required = Gender::male;      // nullopt = any
    std::optional<Region> region_required = Region::palestine; // nullopt = any
    int window_lo = -3;  // 4 BCE
    int window_hi = 73;
    bool allow_fictitious = false;
    std::set<SourceType> source_types = {SourceType::ossuary, SourceType::inscription_papyri,
                                         SourceType::literary};
};

// name -> occurrence count with total; the historical baseline or any
// filtered iteration / adjustment of it. Counts are always >= 1.
struct ReferenceDistribution {
    std::string label;
    std::map<std::string, long long> counts;
    long long total = 0;

    long long count(const std::string& name) const {
        auto it = counts.find(name);
        return it == counts.end() ? 0 : it->second;
    }
    double proportion(const std::string& name) const {
        return total == 0 ? 0.0 : static_cast<double>(count(name)) / static_cast<double>(total);
    }
};

struct Occurrence {
    std::string name_key;
    bool attested = true;  // false = contested (not externally attested)
    std::optional<QualifierKind> qualifier;
};

struct TestCorpus {
    std::string label;
    std::vector<Occurrence> occurrences;

    std::size_t size() const { return occurrences.size(); }
    // Distinct names with occurrence counts, in first-appearance order.
    std::vector<std::pair<std::string, long long>> name_counts() const;
    std::set<std::string> distinct_names() const;
};

using NormalizationTable = std::map<std::string, std::string>;  // raw_form -> name_key

// --- flat-file ingestion -------------------------------------------------
//
// Lexicon CSV columns:
//   record_id,name_key,raw_form,gender,region,date_lo,date_hi,source_type,fictitious,excluded_reason
// Corpus CSV columns:    label,name_key,attested,qualifier_kind
// Normalization CSV:     raw_form,name_key
// Reference CSV:         name_key,count
//
// All files are UTF-8 with a header row. Malformed rows raise InputError
// with the file and line. A record's name_key comes from the normalization
// table when raw_form is listed there, else from the file's name_key
// column, else raw_form itself.

NormalizationTable parse_normalization(const std::string& path);
std::vector<LexiconRecord> parse_lexicon(const std::string& path,
                                         const NormalizationTable& normalization);
std::vector<TestCorpus> parse_corpora(const std::string& path);
TestCorpus parse_corpus(const std::string& path);  // exactly one label expected
ReferenceDistribution parse_reference(const std::string& path, std::string label);
std::string reference_csv(const ReferenceDistribution& dist);

// --- criteria and distributions -------------------------------------------

struct Exclusion {
    std::string record_id;
    std::string name_key;
    std::string reason;
};

struct FilterResult {
    ReferenceDistribution distribution;
    std::vector<LexiconRecord> included;
    std::vector<Exclusion> exclusions;
};

// A record is included when its [date_lo, date_hi] intersects the window
// ("not definitely datable outside") and every other criterion matches.
// Excluded records are kept, each with its first failing criterion.
FilterResult apply_criteria(const std::vector<LexiconRecord>& records,
                            const InclusionCriteria& criteria,
                            std::string label = "reference");

struct IterationSplit {
    FilterResult ossuary;
    FilterResult inscription_papyri;
    FilterResult literary;
};

// Partition by source type; the three totals sum to the combined total
// under the same criteria.
IterationSplit split_iterations(const std::vector<LexiconRecord>& records,
                                const InclusionCriteria& criteria);

// Subtracts each contested corpus occurrence from the reference, then adds
// one artificial occurrence per distinct corpus name. A subtraction that
// would push a count below zero raises InputError naming the name.
ReferenceDistribution adjusted_reference(const ReferenceDistribution& reference,
                                         const TestCorpus& corpus);

enum class RareBasis { distinct_names, occurrences };

// Share of a reference distribution whose names occur at most `threshold`
// times. distinct_names: fraction of names; occurrences: fraction of
// occurrence mass.
double rare_share(const ReferenceDistribution& dist, long long threshold = 1,
                  RareBasis basis = RareBasis::distinct_names);

// Share of corpus names/occurrences that are rare by reference count.
// Names absent from the reference count as rare.
double rare_share(const TestCorpus& corpus, const ReferenceDistribution& reference,
                  long long threshold = 1, RareBasis basis = RareBasis::occurrences);

}  // namespace onomastat
