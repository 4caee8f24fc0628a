#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailrisk/block_maxima.hpp"
#include "tailrisk/scaling_fit.hpp"
#include "tailrisk/series.hpp"
#include "tailrisk/simulation.hpp"

namespace tailrisk {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// Minimal CSV reader: quoted fields, embedded commas/quotes/newlines,
// CRLF tolerant. Returns rows of cells; no type conversion.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

// Cell-level transform applied while loading a catalog column.
enum class ValueTransform { none, magnitude_to_energy };

struct CsvSchema {
    std::string value_column;           // required
    std::string time_column;            // empty: synthesize daily stamps in row order
    std::string time_format = "%Y-%m-%d";
    ValueTransform transform = ValueTransform::none;
    bool drop_zero = false;             // drop records with value == 0 after transform
    std::string units;
};

// Loads a headered CSV into an ObservationSeries. Cell problems raise
// DataError naming the 1-based data row. Records are sorted by time
// (stable), so downstream period and window logic can assume order.
ObservationSeries load_catalog_csv(const std::string& path, const CsvSchema& schema);

// Ready-made schemas for the two catalog shapes the tool ingests.
CsvSchema earthquake_schema(const std::string& magnitude_column = "magnitude",
                            const std::string& time_column = "",
                            const std::string& time_format = "%Y-%m-%d");
CsvSchema rainfall_schema(const std::string& value_column = "precipitation",
                          const std::string& time_column = "",
                          const std::string& time_format = "%Y-%m-%d");

// Writers. All numeric cells go through format_double, so outputs are
// byte-stable for identical inputs.
void write_block_maxima_csv(const BlockMaxima& bm, std::ostream& out);
void write_series_csv(std::span<const SeriesPoint> mpmr_points,
                      std::span<const SeriesPoint> emr_points, std::ostream& out);
void write_summary_csv(const SimSummary& summary, std::ostream& out);

struct TimeseriesRow {
    std::string label;
    std::size_t count = 0;
    std::size_t block_n = 0;
    double mpmr = 0.0;
    double emr = 0.0;
    std::optional<double> ti_mpmr;  // absent when the window cannot support a fit
    std::optional<double> ti_emr;
};

void write_timeseries_csv(std::span<const TimeseriesRow> rows, std::ostream& out);

}  // namespace tailrisk
