// End-to-end checks of the onomastat binary: exit codes, pipeline outputs,
// and manifest-replay byte identity.

#include <cstdlib>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "temp_files.hpp"

namespace {

using nlohmann::json;

struct RunResult {
    int exit_code;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(ONOMASTAT_BIN_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return {WEXITSTATUS(status)};
}

const char* kLexicon =
    "record_id,name_key,raw_form,gender,region,date_lo,date_hi,source_type,fictitious,"
    "excluded_reason\n"
    "r1,,Simon,male,palestine,0,50,ossuary,false,\n"
    "r2,,Simon,male,palestine,10,60,literary,false,\n"
    "r3,,Symeon,male,palestine,0,40,inscription_papyri,false,\n"
    "r4,,Joseph,male,palestine,-10,30,ossuary,false,\n"
    "r5,,Joseph,male,palestine,0,30,literary,false,\n"
    "r6,,Judah,male,palestine,5,45,ossuary,false,\n"
    "r7,,Mariam,female,palestine,0,50,ossuary,false,\n"
    "r8,,Nittai,male,palestine,-120,-100,literary,false,\n"
    "r9,,Honi,male,palestine,0,50,ossuary,false,\n"
    "r10,,Levi,male,diaspora,0,50,literary,false,\n";

const char* kNormalization = "raw_form,name_key\nSymeon,Simon\n";

const char* kCorpus =
    "label,name_key,attested,qualifier_kind\n"
    "sample,Simon,false,disambiguating\n"
    "sample,Simon,false,\n"
    "sample,Joseph,true,\n"
    "sample,Honi,false,\n"
    "sample,Judah,true,title\n";

}  // namespace

TEST_CASE("cli: ingest writes reference, iteration, and exclusion files") {
    testutil::TempDir tmp("cli_ingest");
    auto lex = tmp.file("lexicon.csv", kLexicon);
    auto norm = tmp.file("norm.csv", kNormalization);
    auto out = tmp.path("out");

    auto r = run("ingest --lexicon " + lex + " --normalization " + norm + " --out-dir " + out);
    REQUIRE(r.exit_code == 0);

    auto ref = testutil::slurp(out + "/reference.csv");
    // Simon x3 (one via normalization), Joseph x2, Judah, Honi; Mariam
    // (gender), Nittai (window), Levi (region) excluded.
    CHECK(ref == "name_key,count\nHoni,1\nJoseph,2\nJudah,1\nSimon,3\n");

    auto exclusions = testutil::slurp(out + "/exclusions.csv");
    CHECK(exclusions.find("r7,Mariam,gender female") != std::string::npos);
    // the window reason contains a comma, so the field arrives quoted
    CHECK(exclusions.find("r8,Nittai,\"outside date window [-120,-100]\"") != std::string::npos);
    CHECK(exclusions.find("r10,Levi,region diaspora") != std::string::npos);

    // iteration totals sum to the combined total
    json report = json::parse(testutil::slurp(out + "/ingest_report.json"));
    auto t = report["result"]["iteration_totals"];
    CHECK(t["ossuary"].get<int>() + t["inscription_papyri"].get<int>() +
              t["literary"].get<int>() ==
          report["result"]["total"].get<int>());

    // restricting source types narrows the reference
    auto out2 = tmp.path("out2");
    REQUIRE(run("ingest --lexicon " + lex + " --normalization " + norm +
                " --source-types ossuary,literary --out-dir " + out2)
                .exit_code == 0);
    json narrowed = json::parse(testutil::slurp(out2 + "/ingest_report.json"));
    CHECK(narrowed["result"]["total"].get<int>() ==
          t["ossuary"].get<int>() + t["literary"].get<int>());
}

TEST_CASE("cli: test command emits a GOF report and replays byte-identically") {
    testutil::TempDir tmp("cli_test");
    auto lex = tmp.file("lexicon.csv", kLexicon);
    auto out = tmp.path("out");
    REQUIRE(run("ingest --lexicon " + lex + " --out-dir " + out).exit_code == 0);

    auto corpus = tmp.file("corpus.csv", kCorpus);
    auto report_path = tmp.path("gof.json");
    auto csv_path = tmp.path("gof_bins.csv");
    auto r = run("test --corpus " + corpus + " --reference " + out +
                 "/reference.csv --adjust --top-k 2 --min-expected 1 --B 500 --seed 11 --out " +
                 report_path + " --out-csv " + csv_path);
    REQUIRE(r.exit_code == 0);

    json report = json::parse(testutil::slurp(report_path));
    CHECK(report["result"]["dof"].get<int>() >= 1);
    CHECK(report["result"]["p_asymptotic"].get<double>() > 0.0);
    CHECK(report["result"]["p_monte_carlo"].get<double>() >= 1.0 / 501.0);
    CHECK(report["manifest"]["command"] == "test");
    CHECK(report["manifest"]["seed"] == 11);

    // replay from the embedded manifest into a fresh directory
    auto replay_dir = tmp.path("replay");
    REQUIRE(run("report --manifest " + report_path + " --out-dir " + replay_dir).exit_code == 0);
    CHECK(testutil::slurp(replay_dir + "/gof.json") == testutil::slurp(report_path));
    CHECK(testutil::slurp(replay_dir + "/gof_bins.csv") == testutil::slurp(csv_path));

    // a different worker count changes nothing
    auto w2 = tmp.path("w2");
    REQUIRE(run("report --workers 2 --manifest " + report_path + " --out-dir " + w2).exit_code ==
            0);
    CHECK(testutil::slurp(w2 + "/gof.json") == testutil::slurp(report_path));
}

TEST_CASE("cli: tail command matches the paper-style invocation") {
    testutil::TempDir tmp("cli_tail");
    // reference with Simon at the paper's proportion
    std::string ref_csv = "name_key,count\nSimon,184\n";
    for (int i = 0; i < 46; ++i)
        ref_csv += "bg" + std::to_string(i) + "," + std::to_string(i < 45 ? 44 : 21) + "\n";
    auto ref = tmp.file("ilan.csv", ref_csv);  // 184 + 45*44 + 21 = 2185

    std::string corpus_csv = "label,name_key,attested,qualifier_kind\n";
    for (int i = 0; i < 8; ++i) corpus_csv += "ga,Simon,false,\n";
    for (int i = 1; i <= 45; ++i) corpus_csv += "ga,bg" + std::to_string(i % 45) + ",false,\n";
    for (int i = 0; i < 29; ++i) corpus_csv += "ga,bg0,true,\n";
    auto corpus = tmp.file("ga.csv", corpus_csv);

    auto out = tmp.path("tail.json");
    auto r = run("tail --corpus " + corpus + " --reference " + ref +
                 " --name Simon --mode full --out " + out);
    REQUIRE(r.exit_code == 0);
    json report = json::parse(testutil::slurp(out));
    CHECK(report["result"]["n"] == 82);
    CHECK(report["result"]["k_obs"] == 8);
    double tail = report["result"]["tail"].get<double>();
    CHECK(std::abs(tail - 0.386) <= 0.005);

    auto all_out = tmp.path("tail_all.json");
    r = run("tail --corpus " + corpus + " --reference " + ref + " --all --mode full --out " +
            all_out);
    REQUIRE(r.exit_code == 0);
    json all = json::parse(testutil::slurp(all_out));
    for (const auto& row : all["result"]["names"]) {
        CHECK(row["holm"].get<double>() <= row["bonferroni"].get<double>() + 1e-15);
        CHECK(row["holm"].get<double>() >= row["tail"].get<double>() - 1e-15);
    }

    // contested mode: n drops to the contested slice and the reference is
    // adjusted, so the tail tightens (the assumption-sensitivity spread)
    auto contested_out = tmp.path("tail_contested.json");
    r = run("tail --corpus " + corpus + " --reference " + ref +
            " --name Simon --mode contested --out " + contested_out);
    REQUIRE(r.exit_code == 0);
    json contested = json::parse(testutil::slurp(contested_out));
    CHECK(contested["result"]["n"] == 53);
    CHECK(contested["result"]["tail"].get<double>() < tail);
}

TEST_CASE("cli: exit codes distinguish input and configuration errors") {
    testutil::TempDir tmp("cli_err");
    auto corpus = tmp.file("corpus.csv", kCorpus);
    auto ref = tmp.file("ref.csv", "name_key,count\nSimon,5\nJoseph,3\nJudah,1\nHoni,1\n");

    // missing file -> 2
    CHECK(run("test --corpus nosuch.csv --reference " + ref +
              " --B 0 --seed 1 --out " + tmp.path("x.json"))
              .exit_code == 2);
    // malformed row -> 2
    auto bad = tmp.file("bad.csv", "label,name_key,attested,qualifier_kind\nsample,X,maybe,\n");
    CHECK(run("test --corpus " + bad + " --reference " + ref + " --B 0 --seed 1 --out " +
              tmp.path("y.json"))
              .exit_code == 2);
    // infeasible binning (corpus of 5 vs min-expected 5 over >2 bins) -> 3
    CHECK(run("test --corpus " + corpus + " --reference " + ref +
              " --top-k 4 --min-expected 100 --B 0 --seed 1 --out " + tmp.path("z.json"))
              .exit_code == 3);
    // missing required flag (--seed) -> 2
    CHECK(run("test --corpus " + corpus + " --reference " + ref + " --B 0 --out " +
              tmp.path("w.json"))
              .exit_code == 2);
}

TEST_CASE("cli: intervals and table4 wire through") {
    testutil::TempDir tmp("cli_iv");
    auto ref = tmp.file("ref.csv",
                        "name_key,count\nSimon,50\nJoseph,30\nJudah,15\nLevi,5\n");
    auto corpus = tmp.file("corpus.csv",
                           "label,name_key,attested,qualifier_kind\n"
                           "s,Simon,true,\ns,Simon,true,\ns,Simon,true,\n"
                           "s,Joseph,true,\ns,Levi,true,\n");
    auto out = tmp.path("iv.json");
    auto r = run("intervals --corpus " + corpus + " --reference " + ref +
                 " --uniform-m 100 --B 2000 --seed 5 --out " + out + " --out-csv " +
                 tmp.path("iv.csv"));
    REQUIRE(r.exit_code == 0);
    json report = json::parse(testutil::slurp(out));
    CHECK(report["result"]["names"].size() == 3);
    CHECK(report["result"]["uniform_pool"] == 100);

    auto t4 = tmp.path("t4.json");
    r = run("table4 --N 2582 --R 517 --n 53 --B 0 --out " + t4 + " --out-csv " +
            tmp.path("t4.csv"));
    REQUIRE(r.exit_code == 0);
    json table = json::parse(testutil::slurp(t4));
    auto cdf = table["result"]["distribution"]["cdf"];
    CHECK(cdf.size() == 54);
    CHECK(std::abs(cdf[4].get<double>() - 0.011) < 0.003);
    CHECK(std::abs(cdf[6].get<double>() - 0.073) < 0.003);

    auto csv = testutil::slurp(tmp.path("t4.csv"));
    CHECK(csv.rfind("threshold,cumulative_probability\n", 0) == 0);

    // calibration path: targets from a known R recover it
    auto targets = tmp.file("targets.csv",
                            "threshold,cumulative_probability\n"
                            "4," + std::to_string(cdf[4].get<double>()) + "\n" +
                            "8," + std::to_string(cdf[8].get<double>()) + "\n");
    auto cal_out = tmp.path("t4cal.json");
    r = run("table4 --N 2582 --calibrate-targets " + targets + " --n 53 --B 0 --out " + cal_out);
    REQUIRE(r.exit_code == 0);
    json cal = json::parse(testutil::slurp(cal_out));
    CHECK(cal["result"]["calibration"]["rare"] == 517);
}

TEST_CASE("cli: power ci-width and subsample experiments") {
    testutil::TempDir tmp("cli_power_exp");
    std::string ref_csv = "name_key,count\nSimon,50\n";
    for (int i = 0; i < 9; ++i) ref_csv += "bg" + std::to_string(i) + ",30\n";
    auto ref = tmp.file("ref.csv", ref_csv);

    auto width_out = tmp.path("width.json");
    auto r = run("power --experiment ci-width --reference " + ref +
                 " --name Simon --sizes 20,80 --B 4000 --seed 3 --out " + width_out +
                 " --out-csv " + tmp.path("width.csv"));
    REQUIRE(r.exit_code == 0);
    json width = json::parse(testutil::slurp(width_out));
    REQUIRE(width["result"]["sizes"].size() == 2);
    CHECK(width["result"]["sizes"][1]["width"].get<long long>() >
          width["result"]["sizes"][0]["width"].get<long long>());
    CHECK(testutil::slurp(tmp.path("width.csv"))
              .rfind("n,lo,hi,width,width_over_n,width_over_sqrt_n\n", 0) == 0);

    std::string corpus_csv = "label,name_key,attested,qualifier_kind\n";
    for (int i = 0; i < 30; ++i)
        corpus_csv += "j," + std::string(i % 3 == 0 ? "Simon" : "bg" + std::to_string(i % 9)) +
                      ",true,\n";
    auto corpus = tmp.file("j.csv", corpus_csv);
    auto sub_out = tmp.path("sub.json");
    r = run("power --experiment subsample --reference " + ref + " --corpus " + corpus +
            " --method intervals --n-sub 10 --reps 50 --uniform-m 500 --seed 3 --out " + sub_out);
    REQUIRE(r.exit_code == 0);
    json sub = json::parse(testutil::slurp(sub_out));
    CHECK(sub["result"]["n_sub"] == 10);
    CHECK(sub["result"]["uniform_pool"] == 500);
    CHECK(sub["result"]["mean_frac_names_inside_uniform"].get<double>() >= 0.0);
}

TEST_CASE("cli: ONOMASTAT_DATA_DIR resolves bare input paths") {
    testutil::TempDir tmp("cli_datadir");
    tmp.file("lexicon.csv", kLexicon);
    auto out = tmp.path("out");
    std::string cmd = "ONOMASTAT_DATA_DIR=" + tmp.dir().string() + " " + ONOMASTAT_BIN_PATH +
                      " ingest --lexicon lexicon.csv --out-dir " + out + " >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(testutil::slurp(out + "/reference.csv").rfind("name_key,count\n", 0) == 0);
}

TEST_CASE("cli: header-only lexicon gives an empty reference") {
    testutil::TempDir tmp("cli_empty");
    auto lex = tmp.file(
        "lexicon.csv",
        "record_id,name_key,raw_form,gender,region,date_lo,date_hi,source_type,fictitious,"
        "excluded_reason\n");
    auto out = tmp.path("out");
    REQUIRE(run("ingest --lexicon " + lex + " --out-dir " + out).exit_code == 0);
    CHECK(testutil::slurp(out + "/reference.csv") == "name_key,count\n");
}

TEST_CASE("cli: ingest replays byte-identically too") {
    testutil::TempDir tmp("cli_ingest_replay");
    auto lex = tmp.file("lexicon.csv", kLexicon);
    auto out = tmp.path("out");
    REQUIRE(run("ingest --lexicon " + lex + " --out-dir " + out).exit_code == 0);
    auto replay = tmp.path("replay");
    REQUIRE(run("report --manifest " + out + "/ingest_report.json --out-dir " + replay)
                .exit_code == 0);
    CHECK(testutil::slurp(replay + "/out/reference.csv") ==
          testutil::slurp(out + "/reference.csv"));
    CHECK(testutil::slurp(replay + "/out/ingest_report.json") ==
          testutil::slurp(out + "/ingest_report.json"));
}

TEST_CASE("cli: power runs from a flat key=value config file") {
    testutil::TempDir tmp("cli_power");
    std::string ref_csv = "name_key,count\n";
    const int counts[] = {60, 40, 30, 20, 15, 10, 8, 6, 5, 4};
    for (int i = 0; i < 10; ++i)
        ref_csv += "name" + std::to_string(i) + "," + std::to_string(counts[i]) + "\n";
    auto ref = tmp.file("ref.csv", ref_csv);

    auto config = tmp.file("power.cfg",
                           "# rejection-rate experiment\n"
                           "experiment = rejection\n"
                           "method = gof\n"
                           "generator = historical\n"
                           "n = 80\n"
                           "alpha = 0.05\n"
                           "reps = 300\n"
                           "seed = 42\n"
                           "top_k = 4\n"
                           "min_expected = 4\n"
                           "reference = " + ref + "\n");
    auto out = tmp.path("power.json");
    auto r = run("power --config " + config + " --out " + out + " --out-csv " +
                 tmp.path("power.csv"));
    REQUIRE(r.exit_code == 0);
    json report = json::parse(testutil::slurp(out));
    CHECK(report["result"]["method"] == "gof_chi2");
    CHECK(report["result"]["reps"] == 300);
    double rate = report["result"]["rejection_rate"].get<double>();
    CHECK(rate >= 0.0);
    CHECK(rate <= 0.12);  // null configuration stays near alpha
    auto csv = testutil::slurp(tmp.path("power.csv"));
    CHECK(csv.rfind("method,generator,n,alpha,reps,rejection_rate,seed\n", 0) == 0);

    // flags override config values; the manifest records the merged run
    auto out2 = tmp.path("power2.json");
    REQUIRE(run("power --config " + config + " --reps 100 --out " + out2).exit_code == 0);
    json second = json::parse(testutil::slurp(out2));
    CHECK(second["manifest"]["reps"] == 100);
    CHECK(second["result"]["reps"] == 100);

    // missing seed (not in config, not a flag) is a config error
    auto no_seed = tmp.file("no_seed.cfg",
                            "experiment = rejection\nmethod = gof\ngenerator = historical\n"
                            "n = 50\nreps = 10\nreference = " + ref + "\n");
    CHECK(run("power --config " + no_seed + " --out " + tmp.path("x.json")).exit_code == 3);
}

TEST_CASE("cli: qualifiers command emits the table") {
    testutil::TempDir tmp("cli_q");
    auto ref = tmp.file("ref.csv", "name_key,count\nSimon,184\nHananiah,75\nAgabus,1\n");
    auto corpora = tmp.file("corpora.csv",
                            "label,name_key,attested,qualifier_kind\n"
                            "matthew,Simon,false,disambiguating\n"
                            "matthew,Hananiah,false,disambiguating\n"
                            "matthew,Agabus,false,disambiguating\n"
                            "matthew,Simon,false,title\n"
                            "john,Simon,false,disambiguating\n");
    auto out = tmp.path("q.json");
    auto r = run("qualifiers --corpora " + corpora + " --reference " + ref + " --out " + out +
                 " --out-csv " + tmp.path("q.csv"));
    REQUIRE(r.exit_code == 0);
    auto csv = testutil::slurp(tmp.path("q.csv"));
    CHECK(csv ==
          "corpus,total,tier_top,tier_mid,tier_low\n"
          "matthew,3,1,1,1\n"
          "john,1,1,0,0\n");
}
