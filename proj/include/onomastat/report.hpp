#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "onomastat/binomial.hpp"
#include "onomastat/corpus.hpp"
#include "onomastat/gof.hpp"
#include "onomastat/intervals.hpp"
#include "onomastat/power.hpp"
#include "onomastat/qualifiers.hpp"

namespace onomastat {

// JSON forms of the result types. Keys are emitted sorted, so dumps are
// byte-stable; CSV emitters below are projections of the same data for
// plotting.

nlohmann::json to_json(const GofResult& r);
nlohmann::json to_json(const IntervalReport& r);
nlohmann::json to_json(const TailTestResult& r);
nlohmann::json to_json(const RareCountDistribution& r);
nlohmann::json to_json(const PowerResult& r);
nlohmann::json to_json(const SubsampleSummary& r);
nlohmann::json to_json(const std::vector<QualifierRow>& rows);
nlohmann::json to_json(const std::vector<WidthRow>& rows);
nlohmann::json to_json(const std::vector<Exclusion>& exclusions);

std::string gof_bins_csv(const GofResult& r);
std::string interval_csv(const IntervalReport& r);
std::string table4_csv(const RareCountDistribution& r);
std::string qualifier_csv(const std::vector<QualifierRow>& rows);
std::string power_csv(const PowerResult& r);
std::string width_csv(const std::vector<WidthRow>& rows);
std::string exclusions_csv(const std::vector<Exclusion>& exclusions);

// Canonical number -> string for CSV cells: shortest round-trip form.
std::string format_double(double v);

}  // namespace onomastat
