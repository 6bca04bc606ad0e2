#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nigar/diagnostics.hpp"
#include "nigar/estimation.hpp"
#include "nigar/model.hpp"

namespace nigar {

struct IngestReport {
    TimeSeries series;
    std::size_t rows_read = 0;
    std::size_t rows_dropped = 0;        // missing / non-numeric cells, bad dates
    std::size_t duplicate_dates = 0;     // later row replaced an earlier one
    std::size_t nonpositive_values = 0;  // kept, but flagged
};

// Reads a comma-separated file with a header row and returns the selected
// column. When a "Date" column is present the rows are normalized to
// ascending date order, duplicate dates resolved last-wins; otherwise file
// order is kept and no labels are attached. Rows whose selected cell is
// missing or non-numeric (or whose date fails to parse) are dropped and
// counted. Throws MissingFileError, MissingColumnError,
// EmptyAfterCleaningError.
IngestReport ingest_csv(const std::filesystem::path& path,
                        const std::string& column);

// index,value rows with 17-significant-digit doubles; exact round-trip
// through ingest_csv(path, "value").
void write_series_csv(std::ostream& os, const TimeSeries& y);

std::string format_double(double v);  // %.17g

nlohmann::json to_json(const NigParams& p);
nlohmann::json to_json(const NigArModel& m);
nlohmann::json to_json(const FitReport& r);
nlohmann::json to_json(const TestResult& t);
nlohmann::json to_json(const CorrelogramPoint& p);
nlohmann::json to_json(const FiveNumber& f);
nlohmann::json to_json(const ReplicationSummary& s);
nlohmann::json to_json(const Histogram& h);

std::string to_string(StopCriterion c);
std::string to_string(EmMode m);
std::string to_string(StopReason r);

}  // namespace nigar
