#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gb2kit/distribution.hpp"
#include "gb2kit/fit.hpp"
#include "gb2kit/inequality.hpp"
#include "gb2kit/sample.hpp"
#include "gb2kit/sde.hpp"

namespace gb2kit::io {

using json = nlohmann::json;

struct IngestStats {
    std::size_t rows_loaded = 0;
    std::size_t rows_skipped_nonpositive = 0;
};

struct IngestResult {
    Sample sample;
    IngestStats stats;
};

// Load one numeric column (by header name or 0-based index) from a CSV file.
// A header row is detected from the first record. Non-numeric cells raise
// DataError with the row number; non-positive values are skipped and counted.
IngestResult ingest_csv(const std::string& path, const std::string& column,
                        const std::optional<std::string>& year_column = std::nullopt);

// CPI-style index series, year -> level.
struct DeflatorSeries {
    std::map<int, double> index_by_year;
    int base_year = 0;
};

DeflatorSeries load_deflator_csv(const std::string& path, int base_year,
                                 const std::string& year_column = "year",
                                 const std::string& index_column = "index");

// value * index(base) / index(year) for every observation.
Sample deflate(const Sample& s, const DeflatorSeries& d, int base_year);

json spec_to_json(const DistributionSpec& d);
DistributionSpec spec_from_json(const json& j);

json index_report_to_json(const IndexReport& r);
IndexReport index_report_from_json(const json& j);

json sde_config_to_json(const SdeConfig& c);
SdeConfig sde_config_from_json(const json& j);

json fit_result_to_json(const FitResult& r);
FitResult fit_result_from_json(const json& j);

json report_rows_to_json(const std::vector<ReportRow>& rows);
// Columns: type, parameters, ks, mean, rms, gini, hoover, theil_t, theil_l, dmms.
std::string report_rows_to_csv(const std::vector<ReportRow>& rows);

void write_values_csv(const std::string& path, const std::vector<double>& values,
                      const std::string& header = "value");

}  // namespace gb2kit::io
