#include "heftcom/time.hpp"

#include <charconv>
#include <cstdio>

#include "heftcom/error.hpp"

namespace heftcom {

using namespace std::chrono;

namespace {

sys_seconds bst_start(year y) {
    const sys_days sunday{year_month_weekday_last{y, March, weekday_last{Sunday}}};
    return sunday + hours{1};
}

sys_seconds bst_end(year y) {
    const sys_days sunday{year_month_weekday_last{y, October, weekday_last{Sunday}}};
    return sunday + hours{1};
}

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw InvalidInputError("unparseable timestamp '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

DayConvention parse_day_convention(std::string_view text) {
    if (text == "london" || text == "Europe/London") {
        return DayConvention::kLondon;
    }
    if (text == "utc" || text == "UTC") {
        return DayConvention::kUtc;
    }
    throw InvalidInputError("unknown market-day convention '" + std::string(text) + "'");
}

std::string_view to_string(DayConvention convention) {
    return convention == DayConvention::kLondon ? "london" : "utc";
}

bool is_british_summer_time(sys_seconds utc) {
    const year y = year_month_day{floor<days>(utc)}.year();
    return utc >= bst_start(y) && utc < bst_end(y);
}

seconds london_offset(sys_seconds utc) {
    return is_british_summer_time(utc) ? seconds{3600} : seconds{0};
}

sys_seconds london_to_utc(local_seconds local, bool second_occurrence) {
    const sys_seconds as_bst{local.time_since_epoch() - hours{1}};
    const sys_seconds as_gmt{local.time_since_epoch()};
    const bool bst_valid = is_british_summer_time(as_bst);
    const bool gmt_valid = !is_british_summer_time(as_gmt);
    if (bst_valid && gmt_valid) {
        return second_occurrence ? as_gmt : as_bst;
    }
    if (bst_valid) {
        return as_bst;
    }
    if (gmt_valid) {
        return as_gmt;
    }
    throw InvalidInputError("local time does not exist in Europe/London (spring-forward gap)");
}

bool is_ambiguous_london_time(local_seconds local) {
    const sys_seconds as_bst{local.time_since_epoch() - hours{1}};
    const sys_seconds as_gmt{local.time_since_epoch()};
    return is_british_summer_time(as_bst) && !is_british_summer_time(as_gmt);
}

std::vector<Period> market_day_periods(Date day, DayConvention convention) {
    sys_seconds start;
    sys_seconds end;
    if (convention == DayConvention::kUtc) {
        start = sys_days{day};
        end = start + days{1};
    } else {
        start = london_to_utc(local_days{day});
        end = london_to_utc(local_days{day} + days{1});
    }
    std::vector<Period> periods;
    periods.reserve(50);
    for (auto t = start; t < end; t += kPeriodLength) {
        periods.push_back(t);
    }
    return periods;
}

Date market_day_of(Period period, DayConvention convention) {
    if (convention == DayConvention::kUtc) {
        return Date{floor<days>(period)};
    }
    return Date{floor<days>(period + london_offset(period))};
}

std::vector<Date> market_days(Date first, Date last) {
    std::vector<Date> out;
    for (sys_days d{first}; d <= sys_days{last}; d += days{1}) {
        out.emplace_back(d);
    }
    return out;
}

Period submission_deadline(Date market_day, minutes time_of_day) {
    return sys_days{market_day} - days{1} + time_of_day;
}

int slot_of_day(Period period) {
    const auto since_midnight = period - floor<days>(period);
    return static_cast<int>(duration_cast<minutes>(since_midnight).count() / 30);
}

bool is_daytime(Period period) {
    const auto since_midnight = period - floor<days>(period);
    return since_midnight >= hours{8} && since_midnight < hours{20};
}

bool is_period_aligned(sys_seconds t) {
    return (t.time_since_epoch().count() % 1800) == 0;
}

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw InvalidInputError("unparseable date '" + std::string(text) + "'");
    }
    const Date d{year{parse_int(text.substr(0, 4), text)}, month{static_cast<unsigned>(parse_int(text.substr(5, 2), text))},
                 day{static_cast<unsigned>(parse_int(text.substr(8, 2), text))}};
    if (!d.ok()) {
        throw InvalidInputError("invalid calendar date '" + std::string(text) + "'");
    }
    return d;
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()));
    return buf;
}

sys_seconds parse_utc_timestamp(std::string_view text) {
    // YYYY-MM-DD[T ]HH:MM[:SS][Z|+HH:MM|-HH:MM]
    if (text.size() < 16 || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
        throw InvalidInputError("unparseable timestamp '" + std::string(text) + "'");
    }
    const Date d = parse_date(text.substr(0, 10));
    const int hh = parse_int(text.substr(11, 2), text);
    const int mm = parse_int(text.substr(14, 2), text);
    int ss = 0;
    std::size_t pos = 16;
    if (pos < text.size() && text[pos] == ':') {
        if (text.size() < pos + 3) {
            throw InvalidInputError("unparseable timestamp '" + std::string(text) + "'");
        }
        ss = parse_int(text.substr(pos + 1, 2), text);
        pos += 3;
        // fractional seconds are accepted only when zero
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && text[pos] == '0') {
                ++pos;
            }
        }
    }
    seconds offset{0};
    if (pos < text.size()) {
        const std::string_view zone = text.substr(pos);
        if (zone == "Z" || zone == "UTC" || zone == " UTC") {
            // already UTC
        } else if ((zone[0] == '+' || zone[0] == '-') && (zone.size() == 6 || zone.size() == 3)) {
            const int oh = parse_int(zone.substr(1, 2), text);
            const int om = zone.size() == 6 ? parse_int(zone.substr(4, 2), text) : 0;
            offset = hours{oh} + minutes{om};
            if (zone[0] == '-') {
                offset = -offset;
            }
        } else {
            throw InvalidInputError("unparseable timestamp '" + std::string(text) + "'");
        }
    }
    if (hh > 23 || mm > 59 || ss > 59) {
        throw InvalidInputError("unparseable timestamp '" + std::string(text) + "'");
    }
    return sys_days{d} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_period(Period period) {
    const auto day = floor<days>(period);
    const hh_mm_ss hms{period - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(Date{day}).c_str(), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
    return buf;
}

}  // namespace heftcom
