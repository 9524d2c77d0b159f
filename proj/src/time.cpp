#include "wmr/time.hpp"

#include <array>
#include <cstdio>
#include <stdexcept>

namespace wmr {

// Howard Hinnant's days-from-civil algorithm.
int days_from_civil(const Date& d) {
    int y = d.year;
    const int m = d.month;
    const int day = d.day;
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(day) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

Date civil_from_days(int days) {
    days += 719468;
    const int era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{y + (m <= 2), static_cast<int>(m), static_cast<int>(day)};
}

int day_of_week(const Date& d) {
    // 1970-01-01 was a Thursday.
    int days = days_from_civil(d);
    return ((days % 7) + 7 + 4) % 7;
}

Date add_days(const Date& d, int n) { return civil_from_days(days_from_civil(d) + n); }

bool is_valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12 || d.day < 1) return false;
    static constexpr std::array<int, 12> lengths{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int len = lengths[static_cast<std::size_t>(d.month - 1)];
    bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    if (d.month == 2 && leap) len = 29;
    return d.day <= len;
}

Date parse_date(std::string_view iso) {
    int y = 0, m = 0, day = 0;
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
        std::sscanf(std::string(iso).c_str(), "%d-%d-%d", &y, &m, &day) != 3)
        throw std::invalid_argument("parse_date: expected YYYY-MM-DD, got '" + std::string(iso) + "'");
    Date d{y, m, day};
    if (!is_valid_date(d))
        throw std::invalid_argument("parse_date: invalid calendar date '" + std::string(iso) + "'");
    return d;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

namespace {

Date last_sunday_of(int year, int month) {
    static constexpr std::array<int, 12> lengths{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int len = lengths[static_cast<std::size_t>(month - 1)]; // March and October never vary
    Date last{year, month, len};
    return add_days(last, -day_of_week(last));
}

} // namespace

int london_offset(const Date& d) {
    if (!is_valid_date(d)) throw std::invalid_argument("london_offset: invalid date");
    const Date bst_start = last_sunday_of(d.year, 3);
    const Date bst_end = last_sunday_of(d.year, 10);
    return (d >= bst_start && d < bst_end) ? 1 : 0;
}

TimestampMs utc_midnight_ms(const Date& d) {
    return static_cast<TimestampMs>(days_from_civil(d)) * kMsPerDay;
}

TimestampMs london_day_start_ms(const Date& d) {
    return utc_midnight_ms(d) - london_offset(d) * kMsPerHour;
}

int parse_hhmm(std::string_view text) {
    int h = 0, m = 0;
    if (text.size() != 5 || text[2] != ':' ||
        std::sscanf(std::string(text).c_str(), "%d:%d", &h, &m) != 2 || h < 0 || h > 23 ||
        m < 0 || m > 59)
        throw std::invalid_argument("parse_hhmm: expected HH:MM, got '" + std::string(text) + "'");
    return h * 60 + m;
}

std::string format_hhmm(int minute_of_day) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minute_of_day / 60, minute_of_day % 60);
    return buf;
}

} // namespace wmr
