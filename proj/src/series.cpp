#include "tailrisk/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tailrisk/errors.hpp"

namespace tailrisk {

// Howard Hinnant's public-domain civil-date algorithms.
std::int64_t days_from_civil(const Date& d) {
    const int y = d.year - (d.month <= 2 ? 1 : 0);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned month = mp < 10 ? mp + 3 : mp - 9;
    return {static_cast<int>(y + (month <= 2 ? 1 : 0)), month, day};
}

bool valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12 || d.day < 1) return false;
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    unsigned max_day = lengths[d.month - 1];
    const bool leap = d.year % 4 == 0 && (d.year % 100 != 0 || d.year % 400 == 0);
    if (d.month == 2 && leap) max_day = 29;
    return d.day <= max_day;
}

Date parse_date(const std::string& text, const std::string& format) {
    Date out{0, 0, 0};
    std::size_t ti = 0;
    bool saw_y = false, saw_m = false, saw_d = false;

    auto read_int = [&](std::size_t max_digits, bool allow_sign) -> int {
        std::size_t start = ti;
        bool negative = false;
        if (allow_sign && ti < text.size() && (text[ti] == '-' || text[ti] == '+')) {
            negative = text[ti] == '-';
            ++ti;
        }
        long v = 0;
        std::size_t digits = 0;
        while (ti < text.size() && digits < max_digits && text[ti] >= '0' && text[ti] <= '9') {
            v = v * 10 + (text[ti] - '0');
            ++ti;
            ++digits;
        }
        if (digits == 0) {
            throw DataError("cannot parse date '" + text + "' with format '" + format +
                            "' (expected digits at position " + std::to_string(start) + ")");
        }
        return static_cast<int>(negative ? -v : v);
    };

    for (std::size_t fi = 0; fi < format.size(); ++fi) {
        if (format[fi] == '%' && fi + 1 < format.size()) {
            const char spec = format[++fi];
            if (spec == 'Y') {
                out.year = read_int(5, true);
                saw_y = true;
            } else if (spec == 'm') {
                out.month = static_cast<unsigned>(read_int(2, false));
                saw_m = true;
            } else if (spec == 'd') {
                out.day = static_cast<unsigned>(read_int(2, false));
                saw_d = true;
            } else if (spec == '%') {
                if (ti >= text.size() || text[ti] != '%') {
                    throw DataError("cannot parse date '" + text + "': expected '%'");
                }
                ++ti;
            } else {
                throw std::invalid_argument(std::string("parse_date: unsupported format field %") +
                                            spec);
            }
        } else {
            if (ti >= text.size() || text[ti] != format[fi]) {
                throw DataError("cannot parse date '" + text + "' with format '" + format + "'");
            }
            ++ti;
        }
    }
    // Anything after the format (a time of day, a timezone tag) is ignored.
    if (!saw_y || !saw_m || !saw_d) {
        throw std::invalid_argument("parse_date: format must contain %Y, %m and %d");
    }
    if (!valid_date(out)) {
        throw DataError("date '" + text + "' is not a valid calendar date");
    }
    return out;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", d.year, d.month, d.day);
    return buf;
}

double magnitude_to_energy(double mw) {
    if (!std::isfinite(mw)) throw std::invalid_argument("magnitude_to_energy: non-finite magnitude");
    // mw = (2/3) log10(E) - 3.2  <=>  E = 10^(1.5 (mw + 3.2))
    return std::pow(10.0, 1.5 * (mw + 3.2));
}

double energy_to_magnitude(double joules) {
    if (!(joules > 0.0)) {
        throw std::invalid_argument("energy_to_magnitude: energy must be positive");
    }
    return 2.0 / 3.0 * std::log10(joules) - 3.2;
}

GRParameters eta_to_gr(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta_to_gr: eta must be positive");
    GRParameters out;
    out.big_b = 1.0 / eta;
    out.b_value = 1.5 * out.big_b;
    return out;
}

ObservationSeries prices_to_losses(const ObservationSeries& prices) {
    if (prices.records.size() < 2) {
        throw std::invalid_argument("prices_to_losses: need at least 2 prices");
    }
    ObservationSeries out;
    out.units = "log-loss";
    out.records.reserve(prices.records.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.records.size(); ++i) {
        const double prev = prices.records[i].value;
        const double next = prices.records[i + 1].value;
        if (!(prev > 0.0) || !(next > 0.0)) {
            throw DataError("prices_to_losses: non-positive price at record " +
                            std::to_string(prev > 0.0 ? i + 1 : i));
        }
        const double loss = std::log(prev / next);  // positive when the price fell
        if (loss > 0.0) out.records.push_back({prices.records[i + 1].day, loss});
    }
    return out;
}

namespace {

std::string period_label(std::int64_t day, Period period) {
    const Date d = civil_from_days(day);
    char buf[16];
    switch (period) {
        case Period::year:
            std::snprintf(buf, sizeof buf, "%04d", d.year);
            return buf;
        case Period::decade: {
            const int start = d.year >= 0 ? d.year / 10 * 10 : (d.year - 9) / 10 * 10;
            std::snprintf(buf, sizeof buf, "%04ds", start);
            return buf;
        }
        case Period::month:
            std::snprintf(buf, sizeof buf, "%04d-%02u", d.year, d.month);
            return buf;
    }
    throw std::logic_error("period_label: bad period");
}

}  // namespace

std::vector<std::pair<std::string, ObservationSeries>> aggregate_periods(
    const ObservationSeries& series, Period period) {
    std::vector<std::pair<std::string, ObservationSeries>> out;
    for (const Observation& obs : series.records) {
        std::string label = period_label(obs.day, period);
        if (out.empty() || out.back().first != label) {
            // Records arrive in time order, so a new label opens a new group.
            out.emplace_back(std::move(label), ObservationSeries{{}, series.units});
        }
        out.back().second.records.push_back(obs);
    }
    return out;
}

std::vector<std::pair<std::int64_t, ObservationSeries>> rolling_windows(
    const ObservationSeries& series, std::int64_t window_days, std::int64_t step_days) {
    if (step_days < 1 || window_days < step_days) {
        throw std::invalid_argument("rolling_windows: requires window_days >= step_days >= 1");
    }
    std::vector<std::pair<std::int64_t, ObservationSeries>> out;
    if (series.records.empty()) return out;

    const std::int64_t first_day = series.records.front().day;
    const std::int64_t last_day = series.records.back().day;
    std::size_t lo = 0;  // first record inside the current window
    for (std::int64_t end = first_day + window_days - 1; end <= last_day; end += step_days) {
        const std::int64_t begin = end - window_days + 1;
        while (lo < series.records.size() && series.records[lo].day < begin) ++lo;
        std::size_t hi = lo;
        while (hi < series.records.size() && series.records[hi].day <= end) ++hi;
        if (hi == lo) continue;  // empty window
        ObservationSeries window;
        window.units = series.units;
        window.records.assign(series.records.begin() + static_cast<std::ptrdiff_t>(lo),
                              series.records.begin() + static_cast<std::ptrdiff_t>(hi));
        out.emplace_back(end, std::move(window));
    }
    return out;
}

}  // namespace tailrisk
