#include "onomastat/corpus.hpp"

#include <algorithm>
#include <charconv>

#include "onomastat/csv.hpp"
#include "onomastat/errors.hpp"

namespace onomastat {

namespace {

std::string where(const std::string& path, long long line) {
    return path + ":" + std::to_string(line);
}

int parse_int(std::string_view tok, const std::string& context) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw InputError(context + ": not an integer: '" + std::string(tok) + "'");
    return value;
}

bool parse_bool(std::string_view tok, const std::string& context) {
    if (tok == "true" || tok == "1") return true;
    if (tok == "false" || tok == "0") return false;
    throw InputError(context + ": not a boolean: '" + std::string(tok) + "'");
}

void expect_header(const std::vector<csv::Row>& rows, const std::string& path,
                   const std::vector<std::string>& expected) {
    if (rows.empty()) throw InputError(path + ": missing header row");
    if (rows[0].fields != expected)
        throw InputError(path + ": unexpected header '" + csv::join(rows[0].fields) +
                         "', want '" + csv::join(expected) + "'");
}

}  // namespace

std::string_view to_token(Gender g) {
    switch (g) {
        case Gender::male: return "male";
        case Gender::female: return "female";
        default: return "unknown";
    }
}

std::string_view to_token(Region r) {
    switch (r) {
        case Region::palestine: return "palestine";
        case Region::diaspora: return "diaspora";
        default: return "unknown";
    }
}

std::string_view to_token(SourceType s) {
    switch (s) {
        case SourceType::ossuary: return "ossuary";
        case SourceType::inscription_papyri: return "inscription_papyri";
        default: return "literary";
    }
}

std::string_view to_token(QualifierKind q) {
    return q == QualifierKind::disambiguating ? "disambiguating" : "title";
}

Gender gender_from_token(std::string_view tok, const std::string& context) {
    if (tok == "male") return Gender::male;
    if (tok == "female") return Gender::female;
    if (tok == "unknown") return Gender::unknown;
    throw InputError(context + ": unknown gender token '" + std::string(tok) + "'");
}

Region region_from_token(std::string_view tok, const std::string& context) {
    if (tok == "palestine") return Region::palestine;
    if (tok == "diaspora") return Region::diaspora;
    if (tok == "unknown") return Region::unknown;
    throw InputError(context + ": unknown region token '" + std::string(tok) + "'");
}

SourceType source_type_from_token(std::string_view tok, const std::string& context) {
    if (tok == "ossuary") return SourceType::ossuary;
    if (tok == "inscription_papyri") return SourceType::inscription_papyri;
    if (tok == "literary") return SourceType::literary;
    throw InputError(context + ": unknown source_type token '" + std::string(tok) + "'");
}

std::vector<std::pair<std::string, long long>> TestCorpus::name_counts() const {
    std::vector<std::pair<std::string, long long>> out;
    std::map<std::string, std::size_t> index;
    for (const auto& occ : occurrences) {
        auto it = index.find(occ.name_key);
        if (it == index.end()) {
            index.emplace(occ.name_key, out.size());
            out.emplace_back(occ.name_key, 1);
        } else {
            ++out[it->second].second;
        }
    }
    return out;
}

std::set<std::string> TestCorpus::distinct_names() const {
    std::set<std::string> out;
    for (const auto& occ : occurrences) out.insert(occ.name_key);
    return out;
}

NormalizationTable parse_normalization(const std::string& path) {
    auto rows = csv::read_file(path);
    expect_header(rows, path, {"raw_form", "name_key"});
    NormalizationTable table;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.fields.size() != 2)
            throw InputError(where(path, r.line) + ": expected 2 fields, got " +
                             std::to_string(r.fields.size()));
        if (r.fields[0].empty() || r.fields[1].empty())
            throw InputError(where(path, r.line) + ": raw_form and name_key must be nonempty");
        table[r.fields[0]] = r.fields[1];
    }
    return table;
}

std::vector<LexiconRecord> parse_lexicon(const std::string& path,
                                         const NormalizationTable& normalization) {
    auto rows = csv::read_file(path);
    expect_header(rows, path,
                  {"record_id", "name_key", "raw_form", "gender", "region", "date_lo", "date_hi",
                   "source_type", "fictitious", "excluded_reason"});
    std::vector<LexiconRecord> records;
    records.reserve(rows.size() - 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string ctx = where(path, r.line);
        if (r.fields.size() != 10)
            throw InputError(ctx + ": expected 10 fields, got " + std::to_string(r.fields.size()));
        LexiconRecord rec;
        rec.record_id = r.fields[0];
        rec.raw_form = r.fields[2];
        if (rec.record_id.empty()) throw InputError(ctx + ": record_id must be nonempty");
        if (rec.raw_form.empty()) throw InputError(ctx + ": raw_form must be nonempty");
        if (auto it = normalization.find(rec.raw_form); it != normalization.end())
            rec.name_key = it->second;
        else if (!r.fields[1].empty())
            rec.name_key = r.fields[1];
        else
            rec.name_key = rec.raw_form;
        rec.gender = gender_from_token(r.fields[3], ctx);
        rec.region = region_from_token(r.fields[4], ctx);
        rec.date_lo = parse_int(r.fields[5], ctx);
        rec.date_hi = parse_int(r.fields[6], ctx);
        if (rec.date_lo > rec.date_hi)
            throw InputError(ctx + ": date_lo > date_hi for record '" + rec.record_id + "'");
        rec.source_type = source_type_from_token(r.fields[7], ctx);
        rec.fictitious = parse_bool(r.fields[8], ctx);
        rec.excluded_reason = r.fields[9];
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TestCorpus> parse_corpora(const std::string& path) {
    auto rows = csv::read_file(path);
    expect_header(rows, path, {"label", "name_key", "attested", "qualifier_kind"});
    std::vector<TestCorpus> corpora;
    std::map<std::string, std::size_t> by_label;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string ctx = where(path, r.line);
        if (r.fields.size() != 4)
            throw InputError(ctx + ": expected 4 fields, got " + std::to_string(r.fields.size()));
        if (r.fields[0].empty()) throw InputError(ctx + ": label must be nonempty");
        if (r.fields[1].empty()) throw InputError(ctx + ": name_key must be nonempty");
        Occurrence occ;
        occ.name_key = r.fields[1];
        occ.attested = parse_bool(r.fields[2], ctx);
        if (!r.fields[3].empty()) {
            if (r.fields[3] == "disambiguating")
                occ.qualifier = QualifierKind::disambiguating;
            else if (r.fields[3] == "title")
                occ.qualifier = QualifierKind::title;
            else
                throw InputError(ctx + ": unknown qualifier_kind '" + r.fields[3] + "'");
        }
        auto it = by_label.find(r.fields[0]);
        if (it == by_label.end()) {
            by_label.emplace(r.fields[0], corpora.size());
            corpora.push_back(TestCorpus{r.fields[0], {std::move(occ)}});
        } else {
            corpora[it->second].occurrences.push_back(std::move(occ));
        }
    }
    return corpora;
}

TestCorpus parse_corpus(const std::string& path) {
    auto corpora = parse_corpora(path);
    if (corpora.empty()) return TestCorpus{};
    if (corpora.size() != 1)
        throw InputError(path + ": expected a single corpus label, found " +
                         std::to_string(corpora.size()));
    return std::move(corpora[0]);
}

ReferenceDistribution parse_reference(const std::string& path, std::string label) {
    auto rows = csv::read_file(path);
    expect_header(rows, path, {"name_key", "count"});
    ReferenceDistribution dist;
    dist.label = std::move(label);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string ctx = where(path, r.line);
        if (r.fields.size() != 2)
            throw InputError(ctx + ": expected 2 fields, got " + std::to_string(r.fields.size()));
        if (r.fields[0].empty()) throw InputError(ctx + ": name_key must be nonempty");
        long long c = parse_int(r.fields[1], ctx);
        if (c < 1) throw InputError(ctx + ": count must be >= 1");
        auto [it, fresh] = dist.counts.emplace(r.fields[0], c);
        if (!fresh) throw InputError(ctx + ": duplicate name_key '" + r.fields[0] + "'");
        dist.total += c;
    }
    return dist;
}

std::string reference_csv(const ReferenceDistribution& dist) {
    std::string out = "name_key,count\n";
    for (const auto& [name, c] : dist.counts)
        out += csv::join({name, std::to_string(c)}) + "\n";
    return out;
}

FilterResult apply_criteria(const std::vector<LexiconRecord>& records,
                            const InclusionCriteria& criteria, std::string label) {
    if (criteria.window_lo > criteria.window_hi)
        throw ConfigError("apply_criteria: window_lo > window_hi");
    FilterResult result;
    result.distribution.label = std::move(label);
    for (const auto& rec : records) {
        std::string reason;
        if (!rec.excluded_reason.empty())
            reason = "curated: " + rec.excluded_reason;
        else if (rec.fictitious && !criteria.allow_fictitious)
            reason = "fictitious";
        else if (criteria.gender_required && rec.gender != *criteria.gender_required)
            reason = std::string("gender ") + std::string(to_token(rec.gender));
        else if (criteria.region_required && rec.region != *criteria.region_required)
            reason = std::string("region ") + std::string(to_token(rec.region));
        else if (rec.date_hi < criteria.window_lo || rec.date_lo > criteria.window_hi)
            reason = "outside date window [" + std::to_string(rec.date_lo) + "," +
                     std::to_string(rec.date_hi) + "]";
        else if (!criteria.source_types.contains(rec.source_type))
            reason = std::string("source_type ") + std::string(to_token(rec.source_type));

        if (reason.empty()) {
            result.included.push_back(rec);
            ++result.distribution.counts[rec.name_key];
            ++result.distribution.total;
        } else {
            result.exclusions.push_back({rec.record_id, rec.name_key, reason});
        }
    }
    return result;
}

IterationSplit split_iterations(const std::vector<LexiconRecord>& records,
                                const InclusionCriteria& criteria) {
    IterationSplit split;
    auto one = [&](SourceType st, const char* label) {
        InclusionCriteria c = criteria;
        c.source_types = {st};
        return apply_criteria(records, c, label);
    };
    split.ossuary = one(SourceType::ossuary, "ossuary");
    split.inscription_papyri = one(SourceType::inscription_papyri, "inscription_papyri");
    split.literary = one(SourceType::literary, "literary");
    return split;
}

ReferenceDistribution adjusted_reference(const ReferenceDistribution& reference,
                                         const TestCorpus& corpus) {
    ReferenceDistribution out;
    out.label = reference.label + "|adj:" + corpus.label;
    out.counts = reference.counts;
    for (const auto& occ : corpus.occurrences) {
        if (occ.attested) continue;
        long long& c = out.counts[occ.name_key];  // absent -> 0
        if (c < 1)
            throw InputError("adjusted_reference: count for '" + occ.name_key +
                             "' would fall below zero");
        --c;
    }
    for (const auto& name : corpus.distinct_names()) ++out.counts[name];
    for (auto it = out.counts.begin(); it != out.counts.end();) {
        if (it->second == 0)
            it = out.counts.erase(it);
        else
            ++it;
    }
    out.total = 0;
    for (const auto& [name, c] : out.counts) out.total += c;
    return out;
}

double rare_share(const ReferenceDistribution& dist, long long threshold, RareBasis basis) {
    if (dist.counts.empty())
        throw InputError("rare_share: empty reference distribution");
    long long rare = 0, denom = 0;
    for (const auto& [name, c] : dist.counts) {
        long long w = basis == RareBasis::distinct_names ? 1 : c;
        denom += w;
        if (c <= threshold) rare += w;
    }
    return static_cast<double>(rare) / static_cast<double>(denom);
}

double rare_share(const TestCorpus& corpus, const ReferenceDistribution& reference,
                  long long threshold, RareBasis basis) {
    if (corpus.occurrences.empty())
        throw InputError("rare_share: empty corpus");
    long long rare = 0, denom = 0;
    if (basis == RareBasis::occurrences) {
        for (const auto& occ : corpus.occurrences) {
            ++denom;
            if (reference.count(occ.name_key) <= threshold) ++rare;
        }
    } else {
        for (const auto& name : corpus.distinct_names()) {
            ++denom;
            if (reference.count(name) <= threshold) ++rare;
        }
    }
    return static_cast<double>(rare) / static_cast<double>(denom);
}

}  // namespace onomastat
