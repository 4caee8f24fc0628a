#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tailrisk {

// Calendar date <-> days since 1970-01-01 (proleptic Gregorian). Negative
// day numbers are fine.
struct Date {
    int year = 1970;
    unsigned month = 1;  // 1..12
    unsigned day = 1;    // 1..31
};

std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t z);
bool valid_date(const Date& d);

// Parses with a strftime-like format holding %Y, %m, %d and literal
// characters. Trailing text after the format is consumed (time of day is
// ignored). Throws DataError on mismatch or an impossible date.
Date parse_date(const std::string& text, const std::string& format);
std::string format_date(const Date& d);  // ISO yyyy-mm-dd

struct Observation {
    std::int64_t day = 0;  // days since epoch
    double value = 0.0;
};

// Time-stamped values, nondecreasing in time after loading.
struct ObservationSeries {
    std::vector<Observation> records;
    std::string units;
};

// Gutenberg-Richter frequency-magnitude parameters implied by a scaling
// exponent: big_b for energies, b = 1.5 * big_b for moment magnitudes.
struct GRParameters {
    double b_value = 0.0;
    double big_b = 0.0;
};

// Radiated seismic energy in Joules for a moment magnitude, via
// mw = (2/3) log10(E) - 3.2.
double magnitude_to_energy(double mw);
double energy_to_magnitude(double joules);

// Both Gutenberg-Richter parameters from a fitted scaling exponent eta > 0:
// big_b = 1/eta exactly, b_value = 1.5 * big_b.
GRParameters eta_to_gr(double eta);

// Positive log losses from a positive price series: for each consecutive
// pair, loss = max(-log(p_t / p_{t-1}), 0), stamped at the later time; zero
// losses (flat or rising prices) are dropped.
ObservationSeries prices_to_losses(const ObservationSeries& prices);

enum class Period { year, decade, month };

// Partitions into calendar periods (decades run [1960, 1970) and so on).
// Only periods that contain records appear; order follows the calendar.
std::vector<std::pair<std::string, ObservationSeries>> aggregate_periods(
    const ObservationSeries& series, Period period);

// Rolling calendar windows of window_days, advancing by step_days. A window
// covers [end - window_days + 1, end]; empty windows are omitted.
// Requires window_days >= step_days >= 1.
std::vector<std::pair<std::int64_t, ObservationSeries>> rolling_windows(
    const ObservationSeries& series, std::int64_t window_days, std::int64_t step_days);

}  // namespace tailrisk
