#include "onomastat/report.hpp"

#include "onomastat/csv.hpp"

namespace onomastat {

using nlohmann::json;

std::string format_double(double v) {
    return json(v).dump();
}

json to_json(const GofResult& r) {
    json bins = json::array();
    for (const auto& b : r.bins)
        bins.push_back({{"bin_label", b.label}, {"observed", b.observed}, {"expected", b.expected}});
    json j{{"label", r.label},
           {"statistic", r.statistic},
           {"dof", r.dof},
           {"p_asymptotic", r.p_asymptotic},
           {"B", r.B},
           {"seed", r.seed},
           {"bins", bins}};
    if (r.p_monte_carlo) j["p_monte_carlo"] = *r.p_monte_carlo;
    return j;
}

json to_json(const IntervalReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"name", row.name},
                        {"observed", row.observed},
                        {"hist_lo", row.hist.lo},
                        {"hist_hi", row.hist.hi},
                        {"unif_lo", row.unif.lo},
                        {"unif_hi", row.unif.hi},
                        {"outside_hist", row.outside_hist},
                        {"outside_unif", row.outside_unif}});
    return json{{"label", r.label},
                {"level", r.level},
                {"n", r.n},
                {"B", r.B},
                {"seed", r.seed},
                {"uniform_pool", r.uniform_pool},
                {"quantile_convention",
                 "equal-tail integer quantiles: lo/hi are the smallest counts whose "
                 "cumulative mass reaches (1-level)/2 and (1+level)/2; interval mass >= level"},
                {"names", rows},
                {"n_outside_hist", r.n_outside_hist},
                {"n_outside_unif", r.n_outside_unif}};
}

json to_json(const TailTestResult& r) {
    return json{{"name_key", r.name_key},
                {"k_obs", r.k_obs},
                {"n", r.n},
                {"p_name", r.p_name},
                {"tail", r.tail},
                {"adjusted_tail", r.adjusted_tail},
                {"assumption", r.assumption_label}};
}

json to_json(const RareCountDistribution& r) {
    json j{{"pool_total", r.pool.total},
           {"pool_rare", r.pool.rare},
           {"sampling", r.sampling == Sampling::without_replacement ? "without_replacement"
                                                                    : "with_replacement"},
           {"n", r.n},
           {"pmf", r.pmf},
           {"cdf", r.cdf}};
    if (r.B > 0) {
        j["B"] = r.B;
        j["seed"] = r.seed;
        j["mc_pmf"] = r.mc_pmf;
    }
    return j;
}

json to_json(const PowerResult& r) {
    return json{{"method", std::string(to_token(r.method))},
                {"generator", r.generator},
                {"n", r.n},
                {"alpha", r.alpha},
                {"reps", r.reps},
                {"rejection_rate", r.rejection_rate},
                {"seed", r.seed}};
}

json to_json(const SubsampleSummary& r) {
    json j{{"method", std::string(to_token(r.method))},
           {"n_sub", r.n_sub},
           {"reps", r.reps},
           {"seed", r.seed}};
    if (r.method == TestMethod::gof_chi2) {
        j["median_p"] = r.median_p;
        j["reject_rate_05"] = r.reject_rate_05;
    } else {
        j["uniform_pool"] = r.uniform_pool;
        j["frac_all_inside_uniform"] = r.frac_all_inside_uniform;
        j["mean_frac_names_inside_uniform"] = r.mean_frac_names_inside_uniform;
    }
    return j;
}

json to_json(const std::vector<QualifierRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows)
        arr.push_back({{"corpus", row.corpus},
                       {"total", row.total},
                       {"tier_top", row.tier_top},
                       {"tier_mid", row.tier_mid},
                       {"tier_low", row.tier_low}});
    return json{{"corpora", arr}};
}

json to_json(const std::vector<WidthRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows)
        arr.push_back({{"n", row.n},
                       {"lo", row.interval.lo},
                       {"hi", row.interval.hi},
                       {"width", row.width},
                       {"width_over_n", row.width_over_n},
                       {"width_over_sqrt_n", row.width_over_sqrt_n}});
    return json{{"sizes", arr}};
}

json to_json(const std::vector<Exclusion>& exclusions) {
    json arr = json::array();
    for (const auto& e : exclusions)
        arr.push_back({{"record_id", e.record_id}, {"name_key", e.name_key}, {"reason", e.reason}});
    return json{{"exclusions", arr}};
}

std::string gof_bins_csv(const GofResult& r) {
    std::string out = "bin_label,observed,expected\n";
    for (const auto& b : r.bins)
        out += csv::join({b.label, std::to_string(b.observed), format_double(b.expected)}) + "\n";
    return out;
}

std::string interval_csv(const IntervalReport& r) {
    std::string out = "name,observed,hist_lo,hist_hi,unif_lo,unif_hi,outside_hist,outside_unif\n";
    for (const auto& row : r.rows)
        out += csv::join({row.name, std::to_string(row.observed), std::to_string(row.hist.lo),
                          std::to_string(row.hist.hi), std::to_string(row.unif.lo),
                          std::to_string(row.unif.hi), row.outside_hist ? "true" : "false",
                          row.outside_unif ? "true" : "false"}) +
               "\n";
    return out;
}

std::string table4_csv(const RareCountDistribution& r) {
    std::string out = "threshold,cumulative_probability\n";
    for (std::size_t k = 0; k < r.cdf.size(); ++k)
        out += csv::join({std::to_string(k), format_double(r.cdf[k])}) + "\n";
    return out;
}

std::string qualifier_csv(const std::vector<QualifierRow>& rows) {
    std::string out = "corpus,total,tier_top,tier_mid,tier_low\n";
    for (const auto& row : rows)
        out += csv::join({row.corpus, std::to_string(row.total), std::to_string(row.tier_top),
                          std::to_string(row.tier_mid), std::to_string(row.tier_low)}) +
               "\n";
    return out;
}

std::string power_csv(const PowerResult& r) {
    std::string out = "method,generator,n,alpha,reps,rejection_rate,seed\n";
    out += csv::join({std::string(to_token(r.method)), r.generator, std::to_string(r.n),
                      format_double(r.alpha), std::to_string(r.reps),
                      format_double(r.rejection_rate), std::to_string(r.seed)}) +
           "\n";
    return out;
}

std::string width_csv(const std::vector<WidthRow>& rows) {
    std::string out = "n,lo,hi,width,width_over_n,width_over_sqrt_n\n";
    for (const auto& row : rows)
        out += csv::join({std::to_string(row.n), std::to_string(row.interval.lo),
                          std::to_string(row.interval.hi), std::to_string(row.width),
                          format_double(row.width_over_n),
                          format_double(row.width_over_sqrt_n)}) +
               "\n";
    return out;
}

std::string exclusions_csv(const std::vector<Exclusion>& exclusions) {
    std::string out = "record_id,name_key,reason\n";
    for (const auto& e : exclusions)
        out += csv::join({e.record_id, e.name_key, e.reason}) + "\n";
    return out;
}

}  // namespace onomastat
