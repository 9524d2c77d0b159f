#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmr/types.hpp"

namespace wmr {

/// Structural CSV failure (bad header, wrong field count, unparseable value).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Row rejected for violating a data invariant; carries its line number.
struct ParseIssue {
    int line = 0;
    std::string message;
};

/// One retained day: exactly 1440 bars, bar k at index k.
struct DayBars {
    Date date;
    std::vector<MinuteBar> bars;
};

enum class PeriodTag { pre_2013_06, post_2013_06, full };

/// Days that survived the completeness filter, date-ordered.
struct Dataset {
    std::string pair;
    std::vector<DayBars> days;
    PeriodTag period = PeriodTag::full;
    int excluded_days = 0;
};

using RawDayMap = std::map<Date, std::map<int, MinuteBar>>;

struct BarParseResult {
    RawDayMap days;
    std::vector<ParseIssue> issues; // invariant-violating rows, skipped
};

/// Parse a minute-bar CSV (`date,time,open,high,low,close`). Times are London
/// local by default; a trailing `tz=UTC` header field declares UTC times,
/// which are converted via london_offset. Structural problems throw
/// ParseError with the offending line number; rows with invalid prices are
/// skipped and reported in `issues`.
BarParseResult parse_bar_csv(const std::filesystem::path& path);
BarParseResult parse_bar_csv(std::istream& in, const std::string& origin);

/// Keep only days with all 1440 minutes present; `excluded_days` reports the
/// number dropped. Days with no bars at all (weekends in tick-derived data)
/// are skipped silently and counted in neither total.
Dataset filter_complete_days(const RawDayMap& raw, std::string pair);

/// Split at the June 2013 boundary: pre holds days <= 2013-05-31, post holds
/// days >= 2013-06-01.
std::pair<Dataset, Dataset> split_periods(const Dataset& dataset);

void write_bar_csv(const std::filesystem::path& path, const Dataset& dataset);
void write_bar_csv(std::ostream& out, const Dataset& dataset);

/// Tick CSV: `timestamp_ms,kind,bid,ask,price,source` with kind Q or T;
/// quotes leave `price` empty, trades leave `bid`/`ask` empty.
std::vector<TickEvent> parse_tick_csv(const std::filesystem::path& path);
std::vector<TickEvent> parse_tick_csv(std::istream& in, const std::string& origin);
void write_tick_csv(const std::filesystem::path& path, std::span<const TickEvent> ticks);
void write_tick_csv(std::ostream& out, std::span<const TickEvent> ticks);

/// External daily-return series (`date,return`), e.g. an equity index.
std::map<Date, double> parse_daily_returns_csv(const std::filesystem::path& path);

} // namespace wmr
