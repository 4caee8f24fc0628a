#include "tailrisk/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "tailrisk/errors.hpp"

namespace tailrisk {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool cell_open = false;  // the current row has content (or a trailing comma)

    auto end_cell = [&]() {
        row.push_back(std::move(cell));
        cell.clear();
        cell_open = false;
    };
    auto end_row = [&]() {
        end_cell();
        rows.push_back(std::move(row));
        row.clear();
    };

    char c;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    cell.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; cell_open = true; break;
            case ',': end_cell(); cell_open = true; break;
            case '\r': break;
            case '\n':
                if (!row.empty() || !cell.empty() || cell_open) end_row();
                break;
            default: cell.push_back(c); cell_open = true; break;
        }
    }
    if (quoted) throw DataError("csv: unterminated quoted field at end of input");
    if (!row.empty() || !cell.empty() || cell_open) end_row();
    return rows;
}

namespace {

double parse_cell_double(const std::string& cell, std::size_t data_row, const std::string& col) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
        throw DataError("row " + std::to_string(data_row) + ": cannot parse '" + cell +
                        "' in column '" + col + "' as a number");
    }
    return v;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    std::string have;
    for (const auto& h : header) {
        if (!have.empty()) have += ", ";
        have += h;
    }
    throw DataError("column '" + name + "' not found in header (have: " + have + ")");
}

}  // namespace

ObservationSeries load_catalog_csv(const std::string& path, const CsvSchema& schema) {
    if (schema.value_column.empty()) {
        throw std::invalid_argument("load_catalog_csv: schema needs a value column");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    const auto rows = read_csv(in);
    if (rows.size() < 2) throw DataError("'" + path + "': no data rows");

    const auto& header = rows.front();
    const std::size_t value_idx = find_column(header, schema.value_column);
    const bool timed = !schema.time_column.empty();
    const std::size_t time_idx = timed ? find_column(header, schema.time_column) : 0;

    ObservationSeries series;
    series.units = schema.units;
    series.records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::size_t needed = std::max(value_idx, timed ? time_idx : value_idx);
        if (row.size() <= needed) {
            throw DataError("row " + std::to_string(r) + ": has " + std::to_string(row.size()) +
                            " cells, need at least " + std::to_string(needed + 1));
        }
        double v = parse_cell_double(row[value_idx], r, schema.value_column);
        if (schema.transform == ValueTransform::magnitude_to_energy) {
            v = magnitude_to_energy(v);
        }
        if (schema.drop_zero && v == 0.0) continue;

        std::int64_t day;
        if (timed) {
            try {
                day = days_from_civil(parse_date(row[time_idx], schema.time_format));
            } catch (const DataError& e) {
                throw DataError("row " + std::to_string(r) + ": " + e.what());
            }
        } else {
            day = static_cast<std::int64_t>(r - 1);  // synthetic daily stamp
        }
        series.records.push_back({day, v});
    }
    if (series.records.empty()) {
        throw DataError("'" + path + "': every row was filtered out");
    }
    std::stable_sort(series.records.begin(), series.records.end(),
                     [](const Observation& a, const Observation& b) { return a.day < b.day; });
    return series;
}

CsvSchema earthquake_schema(const std::string& magnitude_column, const std::string& time_column,
                            const std::string& time_format) {
    CsvSchema schema;
    schema.value_column = magnitude_column;
    schema.time_column = time_column;
    schema.time_format = time_format;
    schema.transform = ValueTransform::magnitude_to_energy;
    schema.units = "J";
    return schema;
}

CsvSchema rainfall_schema(const std::string& value_column, const std::string& time_column,
                          const std::string& time_format) {
    CsvSchema schema;
    schema.value_column = value_column;
    schema.time_column = time_column;
    schema.time_format = time_format;
    schema.drop_zero = true;  // dry spells carry no tail information
    schema.units = "mm";
    return schema;
}

void write_block_maxima_csv(const BlockMaxima& bm, std::ostream& out) {
    out << "n,replicate,maximum\n";
    for (std::size_t i = 0; i < bm.grid.sizes.size(); ++i) {
        for (std::size_t r = 0; r < bm.maxima[i].size(); ++r) {
            out << bm.grid.sizes[i] << ',' << r << ',' << format_double(bm.maxima[i][r])
                << '\n';
        }
    }
}

void write_series_csv(std::span<const SeriesPoint> mpmr_points,
                      std::span<const SeriesPoint> emr_points, std::ostream& out) {
    // Join on n; a size missing from one series leaves its cell empty.
    std::vector<std::size_t> sizes;
    for (const auto& p : mpmr_points) sizes.push_back(p.n);
    for (const auto& p : emr_points) sizes.push_back(p.n);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    out << "n,mpmr,emr\n";
    for (std::size_t n : sizes) {
        out << n << ',';
        const auto m = std::find_if(mpmr_points.begin(), mpmr_points.end(),
                                     [n](const SeriesPoint& p) { return p.n == n; });
        if (m != mpmr_points.end()) out << format_double(m->value);
        out << ',';
        const auto e = std::find_if(emr_points.begin(), emr_points.end(),
                                     [n](const SeriesPoint& p) { return p.n == n; });
        if (e != emr_points.end()) out << format_double(e->value);
        out << '\n';
    }
}

void write_summary_csv(const SimSummary& summary, std::ostream& out) {
    out << "method,effective_size,tail_index,mean,sd,mape,failures\n";
    for (const SimCell& cell : summary.cells) {
        out << estimator_name(cell.method) << ',' << cell.effective_size << ','
            << format_double(cell.tail_index) << ',' << format_double(cell.mean) << ','
            << format_double(cell.sd) << ',' << format_double(cell.mape) << ','
            << cell.failures << '\n';
    }
}

void write_timeseries_csv(std::span<const TimeseriesRow> rows, std::ostream& out) {
    out << "label,count,block_n,mpmr,emr,ti_mpmr,ti_emr\n";
    for (const TimeseriesRow& row : rows) {
        out << row.label << ',' << row.count << ',' << row.block_n << ','
            << format_double(row.mpmr) << ',' << format_double(row.emr) << ',';
        if (row.ti_mpmr) out << format_double(*row.ti_mpmr);
        out << ',';
        if (row.ti_emr) out << format_double(*row.ti_emr);
        out << '\n';
    }
}

}  // namespace tailrisk
