#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace wmr {

/// UTC milliseconds since the Unix epoch.
using TimestampMs = std::int64_t;

inline constexpr std::int64_t kMsPerSecond = 1'000;
inline constexpr std::int64_t kMsPerMinute = 60'000;
inline constexpr std::int64_t kMsPerHour = 3'600'000;
inline constexpr std::int64_t kMsPerDay = 86'400'000;
inline constexpr int kMinutesPerDay = 1440;

struct Date {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
    auto operator<=>(const Date&) const = default;
};

/// Days since 1970-01-01 (proleptic Gregorian).
int days_from_civil(const Date& d);
Date civil_from_days(int days);

/// Day of week, 0 = Sunday.
int day_of_week(const Date& d);

Date add_days(const Date& d, int n);

bool is_valid_date(const Date& d);

/// Parse "YYYY-MM-DD". Throws std::invalid_argument on malformed input.
Date parse_date(std::string_view iso);
std::string format_date(const Date& d);

/// Hours that London local time is ahead of GMT on the given date: 1 from the
/// last Sunday in March through the day before the last Sunday in October,
/// 0 otherwise.
int london_offset(const Date& d);

/// UTC timestamp of 00:00 UTC on the given date.
TimestampMs utc_midnight_ms(const Date& d);

/// UTC timestamp of 00:00 London local time on the given date.
TimestampMs london_day_start_ms(const Date& d);

/// Parse "HH:MM" into a minute-of-day index. Throws std::invalid_argument.
int parse_hhmm(std::string_view text);
std::string format_hhmm(int minute_of_day);

} // namespace wmr
