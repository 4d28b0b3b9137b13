#include "onomastat/corpus.hpp"

#include <doctest.h>

#include "onomastat/errors.hpp"
#include "temp_files.hpp"

using namespace onomastat;

namespace {

const char* kLexiconHeader =
    "record_id,name_key,raw_form,gender,region,date_lo,date_hi,source_type,fictitious,"
    "excluded_reason\n";

LexiconRecord record(const std::string& id, const std::string& name, Gender g = Gender::male,
                     Region r = Region::palestine, int lo = 0, int hi = 50,
                     SourceType st = SourceType::ossuary, bool fict = false,
                     const std::string& excl = "") {
    return LexiconRecord{id, name, name, g, r, lo, hi, st, fict, excl};
}

}  // namespace

TEST_CASE("parse_lexicon: header-only file yields no records") {
    testutil::TempDir tmp("lex_empty");
    auto path = tmp.file("lexicon.csv", kLexiconHeader);
    CHECK(parse_lexicon(path, {}).empty());
}

TEST_CASE("parse_lexicon: date order violation is a parse error with the line") {
    testutil::TempDir tmp("lex_dates");
    auto path = tmp.file("lexicon.csv",
                         std::string(kLexiconHeader) +
                             "r1,Simon,Simon,male,palestine,50,10,ossuary,false,\n");
    CHECK_THROWS_WITH_AS(parse_lexicon(path, {}),
                         doctest::Contains("lexicon.csv:2"), InputError);
}

TEST_CASE("parse_lexicon: unknown enum token is a schema error") {
    testutil::TempDir tmp("lex_enum");
    auto path = tmp.file("lexicon.csv",
                         std::string(kLexiconHeader) +
                             "r1,Simon,Simon,male,palestine,0,50,scroll,false,\n");
    CHECK_THROWS_WITH_AS(parse_lexicon(path, {}), doctest::Contains("source_type"), InputError);
}

TEST_CASE("parse_lexicon: variant spellings normalize to one name_key") {
    testutil::TempDir tmp("lex_norm");
    auto norm = tmp.file("norm.csv", "raw_form,name_key\nSymeon,Simon\nShimon,Simon\n");
    auto path = tmp.file("lexicon.csv",
                         std::string(kLexiconHeader) +
                             "r1,,Symeon,male,palestine,0,50,ossuary,false,\n"
                             "r2,,Shimon,male,palestine,0,50,literary,false,\n"
                             "r3,,Simon,male,palestine,0,50,ossuary,false,\n");
    auto records = parse_lexicon(path, parse_normalization(norm));
    REQUIRE(records.size() == 3);
    std::set<std::string> keys;
    for (const auto& r : records) keys.insert(r.name_key);
    CHECK(keys == std::set<std::string>{"Simon"});
    // raw forms survive
    CHECK(records[0].raw_form == "Symeon");
}

TEST_CASE("apply_criteria: date window is interval intersection") {
    InclusionCriteria crit;  // window [-3, 73]
    // Nittai-the-Arbelite analog: whole range before the window.
    auto out = apply_criteria({record("r1", "Nittai", Gender::male, Region::palestine, -120, -100)},
                              crit);
    CHECK(out.distribution.total == 0);
    REQUIRE(out.exclusions.size() == 1);
    CHECK(out.exclusions[0].reason.find("date window") != std::string::npos);

    // Range overlapping the window is "not definitely datable outside".
    out = apply_criteria({record("r2", "Joseph", Gender::male, Region::palestine, -50, 100)}, crit);
    CHECK(out.distribution.total == 1);
    CHECK(out.exclusions.empty());
}

TEST_CASE("apply_criteria: gender filter and audit trail") {
    std::vector<LexiconRecord> records = {
        record("r1", "Simon"),
        record("r2", "Mariam", Gender::female),
        record("r3", "Joseph"),
        record("r4", "Salome", Gender::female),
        record("r5", "Simon"),
    };
    auto out = apply_criteria(records, InclusionCriteria{});
    CHECK(out.distribution.total == 3);
    CHECK(out.distribution.counts.at("Simon") == 2);
    CHECK(out.distribution.counts.at("Joseph") == 1);
    REQUIRE(out.exclusions.size() == 2);
    CHECK(out.exclusions[0].record_id == "r2");
    CHECK(out.exclusions[0].reason == "gender female");
}

TEST_CASE("apply_criteria: curated exclusions and fictitious flags") {
    std::vector<LexiconRecord> records = {
        record("r1", "Ezra", Gender::male, Region::palestine, 0, 50, SourceType::ossuary, false,
               "misreading; likely Avira"),
        record("r2", "Haman", Gender::male, Region::palestine, 0, 50, SourceType::literary, true),
    };
    auto out = apply_criteria(records, InclusionCriteria{});
    CHECK(out.distribution.total == 0);
    REQUIRE(out.exclusions.size() == 2);
    CHECK(out.exclusions[0].reason == "curated: misreading; likely Avira");
    CHECK(out.exclusions[1].reason == "fictitious");

    InclusionCriteria allow;
    allow.allow_fictitious = true;
    CHECK(apply_criteria(records, allow).distribution.total == 1);
}

TEST_CASE("apply_criteria is idempotent") {
    std::vector<LexiconRecord> records = {
        record("a", "Simon"),
        record("b", "Joseph", Gender::male, Region::diaspora),
        record("c", "Judah", Gender::male, Region::palestine, -200, -150),
        record("d", "John"),
    };
    auto first = apply_criteria(records, InclusionCriteria{});
    auto second = apply_criteria(first.included, InclusionCriteria{});
    CHECK(second.distribution.counts == first.distribution.counts);
    CHECK(second.distribution.total == first.distribution.total);
    CHECK(second.exclusions.empty());
}

TEST_CASE("split_iterations partitions by source type") {
    SUBCASE("all-literary fixture leaves the other iterations empty") {
        std::vector<LexiconRecord> records = {
            record("r1", "Simon", Gender::male, Region::palestine, 0, 50, SourceType::literary),
            record("r2", "Joseph", Gender::male, Region::palestine, 0, 50, SourceType::literary),
        };
        auto split = split_iterations(records, InclusionCriteria{});
        CHECK(split.ossuary.distribution.total == 0);
        CHECK(split.inscription_papyri.distribution.total == 0);
        CHECK(split.literary.distribution.total == 2);
    }
    SUBCASE("mixed fixture totals sum to the combined total") {
        std::vector<LexiconRecord> records = {
            record("r1", "Simon", Gender::male, Region::palestine, 0, 50, SourceType::ossuary),
            record("r2", "Simon", Gender::male, Region::palestine, 0, 50, SourceType::literary),
            record("r3", "Joseph", Gender::male, Region::palestine, 0, 50,
                   SourceType::inscription_papyri),
            record("r4", "Judah", Gender::male, Region::palestine, 0, 50, SourceType::ossuary),
            record("r5", "John", Gender::male, Region::palestine, 0, 50, SourceType::literary),
            record("r6", "Ananias", Gender::male, Region::palestine, 0, 50,
                   SourceType::inscription_papyri),
        };
        auto split = split_iterations(records, InclusionCriteria{});
        auto combined = apply_criteria(records, InclusionCriteria{});
        CHECK(split.ossuary.distribution.total + split.inscription_papyri.distribution.total +
                  split.literary.distribution.total ==
              combined.distribution.total);
        CHECK(split.ossuary.distribution.total == 2);
        CHECK(split.inscription_papyri.distribution.total == 2);
        CHECK(split.literary.distribution.total == 2);
    }
}

TEST_CASE("adjusted_reference follows subtract-then-add") {
    ReferenceDistribution ref;
    ref.label = "ref";
    ref.counts = {{"A", 5}, {"B", 2}};
    ref.total = 7;

    SUBCASE("two contested occurrences of A") {
        TestCorpus corpus{"gb", {{"A", false, {}}, {"A", false, {}}}};
        auto adj = adjusted_reference(ref, corpus);
        CHECK(adj.counts.at("A") == 4);  // 5 - 2 + 1
        CHECK(adj.counts.at("B") == 2);
        CHECK(adj.total == 6);
    }
    SUBCASE("attested-only corpus adds one artificial count per distinct name") {
        TestCorpus corpus{"gb", {{"A", true, {}}, {"A", true, {}}, {"B", true, {}}}};
        auto adj = adjusted_reference(ref, corpus);
        CHECK(adj.counts.at("A") == 6);
        CHECK(adj.counts.at("B") == 3);
    }
    SUBCASE("empty corpus is the identity on counts") {
        auto adj = adjusted_reference(ref, TestCorpus{"empty", {}});
        CHECK(adj.counts == ref.counts);
        CHECK(adj.total == ref.total);
    }
    SUBCASE("a name new to the reference comes in with one artificial count") {
        TestCorpus corpus{"gb", {{"C", true, {}}}};
        auto adj = adjusted_reference(ref, corpus);
        CHECK(adj.counts.at("C") == 1);
    }
    SUBCASE("over-subtraction names the offending key") {
        TestCorpus corpus{"gb", {{"B", false, {}}, {"B", false, {}}, {"B", false, {}}}};
        CHECK_THROWS_WITH_AS(adjusted_reference(ref, corpus), doctest::Contains("'B'"),
                             InputError);
    }
}

TEST_CASE("rare_share") {
    ReferenceDistribution ref;
    ref.counts = {{"A", 1}, {"B", 1}, {"C", 1}};
    ref.total = 3;
    CHECK(rare_share(ref) == 1.0);  // every name has count 1

    ReferenceDistribution mixed;
    mixed.counts = {{"A", 10}, {"B", 3}, {"C", 1}, {"D", 1}};
    mixed.total = 15;
    CHECK(rare_share(mixed) == doctest::Approx(2.0 / 4.0));
    CHECK(rare_share(mixed, 1, RareBasis::occurrences) == doctest::Approx(2.0 / 15.0));
    CHECK(rare_share(mixed, 3) == doctest::Approx(3.0 / 4.0));

    // monotone in the threshold
    double prev = 0.0;
    for (long long t = 0; t <= 10; ++t) {
        double s = rare_share(mixed, t);
        CHECK(s >= prev);
        prev = s;
    }

    TestCorpus corpus{"t", {{"A", true, {}}, {"C", true, {}}, {"C", true, {}}, {"Z", true, {}}}};
    // occurrence basis: C, C, Z rare (Z absent from reference) -> 3/4
    CHECK(rare_share(corpus, mixed) == doctest::Approx(3.0 / 4.0));
    // distinct-name basis: C, Z of {A, C, Z} -> 2/3
    CHECK(rare_share(corpus, mixed, 1, RareBasis::distinct_names) == doctest::Approx(2.0 / 3.0));

    CHECK_THROWS_AS(rare_share(ReferenceDistribution{}), InputError);
    CHECK_THROWS_AS(rare_share(TestCorpus{}, mixed), InputError);
}

TEST_CASE("corpus parsing groups rows by label") {
    testutil::TempDir tmp("corpus");
    auto path = tmp.file("corpora.csv",
                         "label,name_key,attested,qualifier_kind\n"
                         "matthew,Simon,false,disambiguating\n"
                         "matthew,Joseph,true,\n"
                         "mark,Simon,false,title\n");
    auto corpora = parse_corpora(path);
    REQUIRE(corpora.size() == 2);
    CHECK(corpora[0].label == "matthew");
    CHECK(corpora[0].size() == 2);
    CHECK(corpora[0].occurrences[0].qualifier == QualifierKind::disambiguating);
    CHECK_FALSE(corpora[0].occurrences[1].qualifier.has_value());
    CHECK(corpora[1].occurrences[0].qualifier == QualifierKind::title);

    CHECK_THROWS_AS(parse_corpus(path), InputError);  // two labels
}

TEST_CASE("csv reader tolerates blank lines, quotes, and embedded newlines") {
    testutil::TempDir tmp("csv_edges");
    auto path = tmp.file("corpora.csv",
                         "label,name_key,attested,qualifier_kind\n"
                         "\n"
                         "c,\"name, with comma\",true,\n"
                         "c,\"multi\nline\",false,\n"
                         "\n");
    auto corpora = parse_corpora(path);
    REQUIRE(corpora.size() == 1);
    REQUIRE(corpora[0].size() == 2);
    CHECK(corpora[0].occurrences[0].name_key == "name, with comma");
    CHECK(corpora[0].occurrences[1].name_key == "multi\nline");

    auto unterminated = tmp.file("bad.csv", "label,name_key,attested,qualifier_kind\nc,\"oops\n");
    CHECK_THROWS_AS(parse_corpora(unterminated), InputError);
}

TEST_CASE("reference round-trips through its CSV form") {
    ReferenceDistribution ref;
    ref.label = "ref";
    ref.counts = {{"Simon", 184}, {"Joseph", 150}, {"rare one", 1}};
    ref.total = 335;
    testutil::TempDir tmp("refcsv");
    auto path = tmp.file("reference.csv", reference_csv(ref));
    auto back = parse_reference(path, "ref");
    CHECK(back.counts == ref.counts);
    CHECK(back.total == ref.total);

    auto bad = tmp.file("bad.csv", "name_key,count\nSimon,0\n");
    CHECK_THROWS_AS(parse_reference(bad, "x"), InputError);
}
