// onomastat: ingest an ancient-name lexicon, build reference distributions,
// and run the competing statistical procedures (goodness-of-fit, per-name
// confidence intervals, exact binomial tails, rare-name-count sampling,
// method-validity power studies, qualifier tables).
//
// Every report is a JSON document embedding its run manifest; re-running a
// manifest reproduces the report byte-for-byte. All randomized commands
// take an explicit --seed. --workers changes speed, never bytes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "onomastat/binomial.hpp"
#include "onomastat/corpus.hpp"
#include "onomastat/csv.hpp"
#include "onomastat/errors.hpp"
#include "onomastat/gof.hpp"
#include "onomastat/intervals.hpp"
#include "onomastat/power.hpp"
#include "onomastat/qualifiers.hpp"
#include "onomastat/report.hpp"

namespace {

using nlohmann::json;
using namespace onomastat;

constexpr const char* kToolVersion = "0.1.0";

std::string resolve_input(const std::string& path) {
    namespace fs = std::filesystem;
    if (fs::exists(path)) return path;
    if (const char* root = std::getenv("ONOMASTAT_DATA_DIR")) {
        fs::path candidate = fs::path(root) / path;
        if (fs::exists(candidate)) return candidate.string();
    }
    throw InputError(path + ": file not found");
}

void write_file(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError(path + ": cannot open for writing");
    out << bytes;
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

// Output path possibly redirected into another directory (manifest replay).
std::string place(const std::string& path, const std::string& out_dir) {
    if (out_dir.empty()) return path;
    return (std::filesystem::path(out_dir) / std::filesystem::path(path).filename()).string();
}

std::string report_bytes(const json& manifest, const json& result) {
    json doc{{"manifest", manifest}, {"result", result}};
    return doc.dump(2) + "\n";
}

ReferenceDistribution load_reference(const std::string& path) {
    return parse_reference(resolve_input(path), stem_of(path));
}

ReferenceDistribution maybe_adjusted(const ReferenceDistribution& ref, const TestCorpus& corpus,
                                     bool adjust) {
    return adjust ? adjusted_reference(ref, corpus) : ref;
}

InclusionCriteria criteria_from(const json& m) {
    InclusionCriteria crit;
    std::string gender = m.value("gender", "male");
    std::string region = m.value("region", "palestine");
    crit.gender_required = gender == "any"
                               ? std::nullopt
                               : std::optional<Gender>(gender_from_token(gender, "--gender"));
    crit.region_required = region == "any"
                               ? std::nullopt
                               : std::optional<Region>(region_from_token(region, "--region"));
    crit.window_lo = m.value("window_lo", -3);
    crit.window_hi = m.value("window_hi", 73);
    if (crit.window_lo > crit.window_hi) throw ConfigError("--criteria-window: LO > HI");
    crit.allow_fictitious = m.value("allow_fictitious", false);
    if (m.contains("source_types")) {
        crit.source_types.clear();
        for (const auto& tok : m["source_types"])
            crit.source_types.insert(
                source_type_from_token(tok.get<std::string>(), "--source-types"));
        if (crit.source_types.empty()) throw ConfigError("--source-types: empty set");
    }
    return crit;
}

BinningSpec binning_from(const json& m) {
    BinningSpec spec;
    spec.top_k = m.value("top_k", 12);
    spec.rare_threshold = m.value("rare_threshold", 1);
    spec.min_expected = m.value("min_expected", 5.0);
    std::string policy = m.value("pool_policy", "ascending");
    if (policy == "ascending")
        spec.pool_policy = PoolPolicy::pool_ascending;
    else if (policy == "other")
        spec.pool_policy = PoolPolicy::pool_into_other;
    else
        throw ConfigError("--pool-policy must be 'ascending' or 'other'");
    return spec;
}

// ---- command runners ------------------------------------------------------
// Each takes the manifest it will embed and writes every output file.

void run_ingest(const json& m, unsigned workers, const std::string& out_dir) {
    (void)workers;
    NormalizationTable norm;
    if (m.contains("normalization"))
        norm = parse_normalization(resolve_input(m["normalization"].get<std::string>()));
    auto records = parse_lexicon(resolve_input(m["lexicon"].get<std::string>()), norm);
    InclusionCriteria crit = criteria_from(m);

    auto combined = apply_criteria(records, crit, "reference");
    auto split = split_iterations(records, crit);
    if (combined.distribution.total == 0)
        std::cerr << "warning: no records pass the inclusion criteria\n";

    std::string dir = place(m["out_dir"].get<std::string>(), out_dir);
    write_file(dir + "/reference.csv", reference_csv(combined.distribution));
    write_file(dir + "/reference_ossuary.csv", reference_csv(split.ossuary.distribution));
    write_file(dir + "/reference_inscription_papyri.csv",
               reference_csv(split.inscription_papyri.distribution));
    write_file(dir + "/reference_literary.csv", reference_csv(split.literary.distribution));
    write_file(dir + "/exclusions.csv", exclusions_csv(combined.exclusions));

    json result{{"records", records.size()},
                {"included", combined.included.size()},
                {"excluded", combined.exclusions.size()},
                {"total", combined.distribution.total},
                {"distinct_names", combined.distribution.counts.size()},
                {"iteration_totals",
                 {{"ossuary", split.ossuary.distribution.total},
                  {"inscription_papyri", split.inscription_papyri.distribution.total},
                  {"literary", split.literary.distribution.total}}}};
    write_file(dir + "/ingest_report.json", report_bytes(m, result));
}

void run_test(const json& m, unsigned workers, const std::string& out_dir) {
    auto corpus = parse_corpus(resolve_input(m["corpus"].get<std::string>()));
    auto reference = load_reference(m["reference"].get<std::string>());
    auto ref = maybe_adjusted(reference, corpus, m.value("adjust", false));
    auto result = gof_test(corpus, ref, binning_from(m), m["B"].get<long long>(),
                           m["seed"].get<std::uint64_t>(), workers);
    if (m.contains("label")) result.label = m["label"].get<std::string>();
    write_file(place(m["out"].get<std::string>(), out_dir), report_bytes(m, to_json(result)));
    if (m.contains("out_csv"))
        write_file(place(m["out_csv"].get<std::string>(), out_dir), gof_bins_csv(result));
}

void run_intervals(const json& m, unsigned workers, const std::string& out_dir) {
    auto corpus = parse_corpus(resolve_input(m["corpus"].get<std::string>()));
    auto reference = load_reference(m["reference"].get<std::string>());
    auto ref = maybe_adjusted(reference, corpus, m.value("adjust", true));
    auto report = graphical_report(corpus, ref, m["uniform_m"].get<long long>(),
                                   m.value("level", 0.95), m["B"].get<long long>(),
                                   m["seed"].get<std::uint64_t>(), workers);
    write_file(place(m["out"].get<std::string>(), out_dir), report_bytes(m, to_json(report)));
    if (m.contains("out_csv"))
        write_file(place(m["out_csv"].get<std::string>(), out_dir), interval_csv(report));
}

NMode mode_from(const std::string& tok) {
    if (tok == "contested" || tok == "contested-53") return NMode::contested_only;
    if (tok == "full" || tok == "full-82") return NMode::full_corpus;
    if (tok == "custom") return NMode::custom;
    throw ConfigError("--mode must be contested, full, or custom");
}

void run_tail(const json& m, unsigned workers, const std::string& out_dir) {
    (void)workers;
    auto corpus = parse_corpus(resolve_input(m["corpus"].get<std::string>()));
    auto reference = load_reference(m["reference"].get<std::string>());
    NMode mode = mode_from(m["mode"].get<std::string>());
    long long custom_n = m.value("custom_n", 0LL);

    if (!m.value("all_names", false) && !m.contains("name"))
        throw ConfigError("tail: give --name or --all");
    json result;
    if (m.value("all_names", false)) {
        std::vector<TailTestResult> tests;
        std::vector<double> tails;
        for (const auto& [name, c] : corpus.name_counts()) {
            tests.push_back(name_tail_test(name, corpus, reference, mode, custom_n));
            tails.push_back(tests.back().tail);
        }
        auto bonf = adjust(tails, AdjustMethod::bonferroni);
        auto holm = adjust(tails, AdjustMethod::holm);
        json rows = json::array();
        for (std::size_t i = 0; i < tests.size(); ++i) {
            json row = to_json(tests[i]);
            row.erase("adjusted_tail");
            row["bonferroni"] = bonf[i];
            row["holm"] = holm[i];
            rows.push_back(std::move(row));
        }
        result = json{{"names", rows}};
    } else {
        result = to_json(
            name_tail_test(m["name"].get<std::string>(), corpus, reference, mode, custom_n));
    }
    write_file(place(m["out"].get<std::string>(), out_dir), report_bytes(m, result));
}

void run_table4(const json& m, unsigned workers, const std::string& out_dir) {
    (void)workers;
    Sampling sampling = m.value("sampling", "without") == "with"
                            ? Sampling::with_replacement
                            : Sampling::without_replacement;
    long long total = m["N"].get<long long>();
    long long n = m["n"].get<long long>();
    long long B = m.value("B", 0LL);
    if (B > 0 && !m.contains("seed"))
        throw ConfigError("table4: --seed is required when B > 0");
    std::uint64_t seed = m.value("seed", 0ULL);

    json result;
    long long rare;
    if (m.contains("calibrate_targets")) {
        auto rows = csv::read_file(resolve_input(m["calibrate_targets"].get<std::string>()));
        std::vector<std::pair<long long, double>> targets;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].fields.size() != 2)
                throw InputError("calibration targets: expected threshold,cumulative_probability");
            targets.emplace_back(std::stoll(rows[i].fields[0]), std::stod(rows[i].fields[1]));
        }
        auto cal = calibrate_rare_pool(total, n, sampling, targets);
        rare = cal.rare;
        result["calibration"] = {{"rare", cal.rare}, {"max_abs_dev", cal.max_abs_dev}};
    } else if (m.contains("R")) {
        rare = m["R"].get<long long>();
    } else {
        throw ConfigError("table4: give --R or --calibrate-targets");
    }
    auto dist = rare_count_distribution({total, rare}, n, sampling, B, seed);
    result["distribution"] = to_json(dist);
    write_file(place(m["out"].get<std::string>(), out_dir), report_bytes(m, result));
    if (m.contains("out_csv"))
        write_file(place(m["out_csv"].get<std::string>(), out_dir), table4_csv(dist));
}

// Flat key=value experiment config ('#' comments, blank lines ignored).
// Values are typed by key so they merge into the manifest like flags do.
json parse_power_config(const std::string& path) {
    static const std::set<std::string> ints{"n",    "reps",       "M",       "B",
                                            "interval_B", "n_sub", "uniform_m", "top_k",
                                            "rare_threshold"};
    static const std::set<std::string> reals{"alpha", "level", "min_expected", "mixture_weight"};
    static const std::set<std::string> strings{"experiment", "method", "generator",  "name",
                                               "corpus",     "reference", "out",     "out_csv",
                                               "pool_policy"};
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open config");
    json out;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(path + ":" + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
        };
        trim(key);
        trim(value);
        try {
            if (key == "seed")
                out[key] = static_cast<std::uint64_t>(std::stoull(value));
            else if (key == "sizes") {
                std::vector<long long> sizes;
                std::size_t pos = 0;
                while (pos < value.size()) {
                    auto comma = value.find(',', pos);
                    sizes.push_back(std::stoll(value.substr(pos, comma - pos)));
                    pos = comma == std::string::npos ? value.size() : comma + 1;
                }
                out[key] = sizes;
            } else if (ints.contains(key))
                out[key] = std::stoll(value);
            else if (reals.contains(key))
                out[key] = std::stod(value);
            else if (strings.contains(key))
                out[key] = value;
            else
                throw InputError(path + ":" + std::to_string(line_no) + ": unknown key '" + key +
                                 "'");
        } catch (const std::invalid_argument&) {
            throw InputError(path + ":" + std::to_string(line_no) + ": bad value for '" + key +
                             "'");
        }
    }
    return out;
}

Generator generator_from(const json& m, const ReferenceDistribution& reference) {
    std::string kind = m["generator"].get<std::string>();
    auto pool = [&] {
        // The M most popular reference names, equiprobable. M=0 means all.
        long long want = m.value("M", 0LL);
        std::vector<std::pair<std::string, long long>> ranked(reference.counts.begin(),
                                                              reference.counts.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (want == 0) want = static_cast<long long>(ranked.size());
        if (want < 1 || want > static_cast<long long>(ranked.size()))
            throw ConfigError("--M exceeds the reference name inventory");
        std::vector<std::string> names;
        for (long long i = 0; i < want; ++i) names.push_back(ranked[i].first);
        return names;
    };
    if (kind == "historical") return Generator::historical(reference);
    if (kind == "uniform") return Generator::uniform(pool());
    if (kind == "mixture")
        return Generator::mixture(reference, pool(), m.value("mixture_weight", 0.5));
    throw ConfigError("--generator must be historical, uniform, or mixture");
}

void run_power(const json& m, unsigned workers, const std::string& out_dir) {
    std::string experiment = m.value("experiment", "rejection");
    auto need = [&m, &experiment](const char* key, const char* flag) {
        if (!m.contains(key))
            throw ConfigError(std::string("power ") + experiment + ": missing " + flag);
    };
    need("reference", "--reference");
    need("seed", "--seed");
    need("out", "--out");
    auto reference = load_reference(m["reference"].get<std::string>());

    MethodConfig cfg;
    cfg.binning = binning_from(m);
    cfg.interval_level = m.value("level", 0.95);
    cfg.interval_B = m.value("interval_B", 10000LL);
    cfg.uniform_pool = m.value("uniform_m", 0LL);
    cfg.target_name = m.value("name", std::string{});

    json result;
    std::string csv_out;
    if (experiment == "rejection") {
        need("method", "--method");
        need("generator", "--generator");
        need("n", "--n");
        need("reps", "--reps");
        auto method_tok = m["method"].get<std::string>();
        TestMethod method = method_tok == "gof"         ? TestMethod::gof_chi2
                            : method_tok == "intervals" ? TestMethod::interval_overlap
                            : method_tok == "tail"      ? TestMethod::binomial_single_name
                                                        : throw ConfigError(
                                                              "--method must be gof, intervals, "
                                                              "or tail");
        auto r = rejection_rate(method, generator_from(m, reference), reference,
                                m["n"].get<long long>(), m.value("alpha", 0.05),
                                m["reps"].get<long long>(), m["seed"].get<std::uint64_t>(), cfg,
                                workers);
        result = to_json(r);
        csv_out = power_csv(r);
    } else if (experiment == "ci-width") {
        need("name", "--name");
        need("sizes", "--sizes");
        need("B", "--B");
        std::vector<long long> sizes = m["sizes"].get<std::vector<long long>>();
        auto rows = ci_width_scaling(reference, m["name"].get<std::string>(), sizes,
                                     cfg.interval_level, m["B"].get<long long>(),
                                     m["seed"].get<std::uint64_t>(), workers);
        result = to_json(rows);
        csv_out = width_csv(rows);
    } else if (experiment == "subsample") {
        need("corpus", "--corpus");
        need("method", "--method");
        need("n_sub", "--n-sub");
        need("reps", "--reps");
        auto corpus = parse_corpus(resolve_input(m["corpus"].get<std::string>()));
        auto method_tok = m["method"].get<std::string>();
        TestMethod method = method_tok == "gof" ? TestMethod::gof_chi2
                            : method_tok == "intervals"
                                ? TestMethod::interval_overlap
                                : throw ConfigError("subsample: --method must be gof or intervals");
        auto summary = subsample_experiment(corpus, m["n_sub"].get<long long>(),
                                            m["reps"].get<long long>(), reference, method,
                                            m["seed"].get<std::uint64_t>(), cfg, workers);
        result = to_json(summary);
    } else {
        throw ConfigError("--experiment must be rejection, ci-width, or subsample");
    }
    write_file(place(m["out"].get<std::string>(), out_dir), report_bytes(m, result));
    if (m.contains("out_csv") && !csv_out.empty())
        write_file(place(m["out_csv"].get<std::string>(), out_dir), csv_out);
}

void run_qualifiers(const json& m, unsigned workers, const std::string& out_dir) {
    (void)workers;
    auto corpora = parse_corpora(resolve_input(m["corpora"].get<std::string>()));
    auto reference = load_reference(m["reference"].get<std::string>());
    TierCuts cuts{m.value("tier_top", 102LL), m.value("tier_mid", 6LL)};
    auto rows = qualifier_table(corpora, reference, cuts, m.value("exclude_self", true));
    write_file(place(m["out"].get<std::string>(), out_dir), report_bytes(m, to_json(rows)));
    if (m.contains("out_csv"))
        write_file(place(m["out_csv"].get<std::string>(), out_dir), qualifier_csv(rows));
}

void dispatch(const json& manifest, unsigned workers, const std::string& out_dir) {
    std::string command = manifest.at("command").get<std::string>();
    if (command == "ingest") run_ingest(manifest, workers, out_dir);
    else if (command == "test") run_test(manifest, workers, out_dir);
    else if (command == "intervals") run_intervals(manifest, workers, out_dir);
    else if (command == "tail") run_tail(manifest, workers, out_dir);
    else if (command == "table4") run_table4(manifest, workers, out_dir);
    else if (command == "power") run_power(manifest, workers, out_dir);
    else if (command == "qualifiers") run_qualifiers(manifest, workers, out_dir);
    else throw InputError("manifest: unknown command '" + command + "'");
}

void run_report_replay(const std::string& manifest_path, unsigned workers,
                       const std::string& out_dir) {
    std::ifstream in(resolve_input(manifest_path), std::ios::binary);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(manifest_path + ": not a JSON report: " + e.what());
    }
    if (!doc.contains("manifest"))
        throw InputError(manifest_path + ": no embedded manifest");
    dispatch(doc["manifest"], workers, out_dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"onomastat: statistical toolkit for ancient-name frequency analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name
    app.set_version_flag("--version", kToolVersion);
    unsigned workers = 1;
    app.add_option("--workers", workers, "worker threads (speed only, never output bytes)")
        ->capture_default_str();

    json m;  // manifest under construction
    m["tool_version"] = kToolVersion;

    // helpers to register options writing straight into the manifest
    auto opt_str = [&m](CLI::App* cmd, const std::string& flag, const std::string& key,
                        const std::string& help, bool required = false) {
        auto* o = cmd->add_option_function<std::string>(
            flag, [&m, key](const std::string& v) { m[key] = v; }, help);
        if (required) o->required();
        return o;
    };
    auto opt_ll = [&m](CLI::App* cmd, const std::string& flag, const std::string& key,
                       const std::string& help, bool required = false) {
        auto* o = cmd->add_option_function<long long>(
            flag, [&m, key](long long v) { m[key] = v; }, help);
        if (required) o->required();
        return o;
    };
    auto opt_dbl = [&m](CLI::App* cmd, const std::string& flag, const std::string& key,
                        const std::string& help) {
        return cmd->add_option_function<double>(
            flag, [&m, key](double v) { m[key] = v; }, help);
    };
    auto opt_seed = [&m](CLI::App* cmd) {
        return cmd
            ->add_option_function<std::uint64_t>(
                "--seed", [&m](std::uint64_t v) { m["seed"] = v; },
                "RNG seed (required: no wall-clock default)")
            ->required();
    };
    auto opt_flag = [&m](CLI::App* cmd, const std::string& flag, const std::string& key,
                         const std::string& help) {
        return cmd->add_flag_function(
            flag, [&m, key](std::int64_t) { m[key] = true; }, help);
    };
    auto add_binning = [&](CLI::App* cmd) {
        opt_ll(cmd, "--top-k", "top_k", "individual bins for the most popular names");
        opt_ll(cmd, "--rare-threshold", "rare_threshold", "reference count at or below is rare");
        opt_dbl(cmd, "--min-expected", "min_expected", "pool bins with expected below this");
        opt_str(cmd, "--pool-policy", "pool_policy", "ascending | other");
    };
    auto add_window = [&](CLI::App* cmd) {
        cmd->add_option_function<std::string>(
            "--criteria-window",
            [&m](const std::string& v) {
                auto colon = v.find(':');
                if (colon == std::string::npos)
                    throw CLI::ValidationError("--criteria-window", "expected LO:HI");
                m["window_lo"] = std::stoi(v.substr(0, colon));
                m["window_hi"] = std::stoi(v.substr(colon + 1));
            },
            "inclusion window LO:HI, astronomical years (default -3:73)");
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse a lexicon and build reference files");
    {
        opt_str(ingest, "--lexicon", "lexicon", "lexicon CSV", true);
        opt_str(ingest, "--normalization", "normalization", "raw_form,name_key CSV");
        opt_str(ingest, "--out-dir", "out_dir", "output directory", true);
        opt_str(ingest, "--gender", "gender", "male | female | unknown | any");
        opt_str(ingest, "--region", "region", "palestine | diaspora | unknown | any");
        add_window(ingest);
        opt_flag(ingest, "--allow-fictitious", "allow_fictitious", "keep fictitious records");
        ingest->add_option_function<std::vector<std::string>>(
            "--source-types",
            [&m](const std::vector<std::string>& v) { m["source_types"] = v; },
            "subset of ossuary,inscription_papyri,literary (comma separated)")
            ->delimiter(',');
    }

    // test
    auto* test = app.add_subcommand("test", "chi-squared goodness-of-fit of a corpus");
    {
        opt_str(test, "--corpus", "corpus", "corpus CSV", true);
        opt_str(test, "--reference", "reference", "reference CSV", true);
        opt_flag(test, "--adjust", "adjust", "use the artificial-occurrence adjusted reference");
        opt_str(test, "--label", "label", "report label override");
        add_binning(test);
        opt_ll(test, "--B", "B", "Monte Carlo replicates (0 = asymptotic only)", true);
        opt_seed(test);
        opt_str(test, "--out", "out", "JSON report path", true);
        opt_str(test, "--out-csv", "out_csv", "per-bin CSV path");
    }

    // intervals
    auto* intervals = app.add_subcommand("intervals", "per-name historical and uniform intervals");
    {
        opt_str(intervals, "--corpus", "corpus", "corpus CSV", true);
        opt_str(intervals, "--reference", "reference", "reference CSV", true);
        intervals->add_flag_function(
            "--adjust", [&m](std::int64_t) { m["adjust"] = true; },
            "adjust the reference first (the default)");
        intervals->add_flag_function(
            "--no-adjust", [&m](std::int64_t) { m["adjust"] = false; },
            "use the reference as given");
        opt_ll(intervals, "--uniform-m", "uniform_m", "uniform pool size M (required)", true);
        opt_dbl(intervals, "--level", "level", "interval level (default 0.95)");
        opt_ll(intervals, "--B", "B", "interval-construction replicates", true);
        opt_seed(intervals);
        opt_str(intervals, "--out", "out", "JSON report path", true);
        opt_str(intervals, "--out-csv", "out_csv", "plot-ready CSV path");
    }

    // tail
    auto* tail = app.add_subcommand("tail", "exact binomial tail test for a name");
    {
        opt_str(tail, "--corpus", "corpus", "corpus CSV", true);
        opt_str(tail, "--reference", "reference", "reference CSV", true);
        opt_str(tail, "--name", "name", "name to test");
        opt_flag(tail, "--all", "all_names", "test every corpus name, with adjustments");
        opt_str(tail, "--mode", "mode", "contested | full | custom", true);
        opt_ll(tail, "--custom-n", "custom_n", "n for custom mode");
        opt_str(tail, "--out", "out", "JSON report path", true);
    }

    // table4
    auto* table4 = app.add_subcommand("table4", "rare-name-count sampling distribution");
    {
        opt_ll(table4, "--N", "N", "pool size in occurrences", true);
        opt_ll(table4, "--R", "R", "rare occurrences in the pool");
        opt_str(table4, "--calibrate-targets", "calibrate_targets",
                "CSV threshold,cumulative_probability to calibrate R");
        opt_ll(table4, "--n", "n", "sample size", true);
        opt_str(table4, "--sampling", "sampling", "without | with (replacement)");
        opt_ll(table4, "--B", "B", "Monte Carlo cross-check replicates (0 = exact only)");
        table4->add_option_function<std::uint64_t>(
            "--seed", [&m](std::uint64_t v) { m["seed"] = v; }, "RNG seed (needed when B > 0)");
        opt_str(table4, "--out", "out", "JSON report path", true);
        opt_str(table4, "--out-csv", "out_csv", "threshold,cumulative CSV path");
    }

    // power
    auto* power = app.add_subcommand("power", "method-validity simulations");
    std::string power_config;
    {
        power->add_option("--config", power_config,
                          "flat key=value experiment config; flags override");
        opt_str(power, "--experiment", "experiment", "rejection | ci-width | subsample");
        opt_str(power, "--reference", "reference", "reference CSV");
        opt_str(power, "--method", "method", "gof | intervals | tail");
        opt_str(power, "--generator", "generator", "historical | uniform | mixture");
        opt_ll(power, "--M", "M", "uniform pool size (0 = whole reference inventory)");
        opt_dbl(power, "--mixture-weight", "mixture_weight", "historical weight in [0,1]");
        opt_ll(power, "--n", "n", "generated corpus size");
        opt_dbl(power, "--alpha", "alpha", "test level (default 0.05)");
        opt_ll(power, "--reps", "reps", "replicates");
        power->add_option_function<std::uint64_t>(
            "--seed", [&m](std::uint64_t v) { m["seed"] = v; },
            "RNG seed (required here or in the config)");
        opt_str(power, "--name", "name", "target name (tail method / ci-width)");
        power->add_option_function<std::vector<long long>>(
            "--sizes", [&m](const std::vector<long long>& v) { m["sizes"] = v; },
            "sample sizes for ci-width, comma separated")
            ->delimiter(',');
        opt_ll(power, "--B", "B", "interval replicates for ci-width");
        opt_ll(power, "--interval-B", "interval_B", "per-name CI replicates (intervals method)");
        opt_dbl(power, "--level", "level", "interval level (default 0.95)");
        opt_str(power, "--corpus", "corpus", "corpus CSV (subsample)");
        opt_ll(power, "--n-sub", "n_sub", "subsample size");
        opt_ll(power, "--uniform-m", "uniform_m", "uniform band pool size (subsample)");
        add_binning(power);
        opt_str(power, "--out", "out", "JSON report path");
        opt_str(power, "--out-csv", "out_csv", "CSV path");
    }

    // qualifiers
    auto* qualifiers = app.add_subcommand("qualifiers", "disambiguating qualifiers by tier");
    {
        opt_str(qualifiers, "--corpora", "corpora", "corpus CSV (may hold several labels)", true);
        opt_str(qualifiers, "--reference", "reference", "reference CSV", true);
        opt_ll(qualifiers, "--tier-top", "tier_top", "top tier minimum count (default 102)");
        opt_ll(qualifiers, "--tier-mid", "tier_mid", "mid tier minimum count (default 6)");
        qualifiers->add_flag_function(
            "--exclude-self", [&m](std::int64_t) { m["exclude_self"] = true; },
            "subtract each corpus's attested occurrences before tiering (the default)");
        qualifiers->add_flag_function(
            "--include-self", [&m](std::int64_t) { m["exclude_self"] = false; },
            "tier against the raw reference counts");
        opt_str(qualifiers, "--out", "out", "JSON report path", true);
        opt_str(qualifiers, "--out-csv", "out_csv", "Table-1-shaped CSV path");
    }

    // report (manifest replay)
    auto* report = app.add_subcommand("report", "re-run a report from its embedded manifest");
    std::string manifest_path, replay_dir;
    report->add_option("--manifest", manifest_path, "existing JSON report")->required();
    report->add_option("--out-dir", replay_dir, "redirect outputs into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // flag misuse is an input error; --help stays 0
    }

    try {
        if (report->parsed()) {
            run_report_replay(manifest_path, workers, replay_dir);
        } else {
            if (power->parsed() && !power_config.empty()) {
                json defaults = parse_power_config(resolve_input(power_config));
                for (auto& [key, value] : defaults.items())
                    if (!m.contains(key)) m[key] = value;  // flags win
            }
            for (auto* cmd : {ingest, test, intervals, tail, table4, power, qualifiers})
                if (cmd->parsed()) m["command"] = cmd->get_name();
            dispatch(m, workers, "");
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
