#pragma once

// Settlement-period calendar: UTC half-hours, GB local market days and
// the day-ahead submission deadline.

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace heftcom {

/// UTC start of a half-hour settlement period.
using Period = std::chrono::sys_seconds;
using Date = std::chrono::year_month_day;

inline constexpr std::chrono::minutes kPeriodLength{30};
inline constexpr int kSlotsPerDay = 48;

/// How a market day maps onto UTC half-hours.
enum class DayConvention {
    kLondon,  // GB local calendar day; 46/48/50 periods around DST changes
    kUtc,     // plain UTC day, always 48 periods
};

DayConvention parse_day_convention(std::string_view text);
std::string_view to_string(DayConvention convention);

/// True when British Summer Time is in force at the given UTC instant.
bool is_british_summer_time(std::chrono::sys_seconds utc);

/// Offset of Europe/London local time from UTC at the given instant.
std::chrono::seconds london_offset(std::chrono::sys_seconds utc);

/// Converts a Europe/London wall-clock time to UTC. Times inside the
/// spring-forward gap throw; times inside the autumn overlap resolve to the
/// first (BST) occurrence unless `second_occurrence` is set.
std::chrono::sys_seconds london_to_utc(std::chrono::local_seconds local, bool second_occurrence = false);

/// True when the wall-clock time occurs twice on the autumn transition day.
bool is_ambiguous_london_time(std::chrono::local_seconds local);

/// UTC period starts belonging to a market day, in order.
std::vector<Period> market_day_periods(Date day, DayConvention convention);

Date market_day_of(Period period, DayConvention convention);

/// Inclusive list of calendar days between first and last.
std::vector<Date> market_days(Date first, Date last);

/// The 09:20 UTC gate closure on the day before delivery.
Period submission_deadline(Date market_day, std::chrono::minutes time_of_day = std::chrono::minutes{9 * 60 + 20});

/// UTC half-hour index within the day, 0..47.
int slot_of_day(Period period);

/// Daytime is 08:00 <= UTC start < 20:00.
bool is_daytime(Period period);

bool is_period_aligned(std::chrono::sys_seconds t);

Date parse_date(std::string_view text);
std::string format_date(Date day);

/// Accepts `YYYY-MM-DDTHH:MM[:SS]` with an optional `Z` or `+HH:MM` suffix
/// (a space may replace the `T`). Without a suffix the time is UTC.
std::chrono::sys_seconds parse_utc_timestamp(std::string_view text);

/// ISO-8601 with trailing `Z`.
std::string format_period(Period period);

}  // namespace heftcom
