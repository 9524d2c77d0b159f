#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wmr/prices.hpp"
#include "wmr/time.hpp"

namespace wmr {

/// Best bid/ask update from one source. Valid quotes have bid > 0, ask > 0
/// and ask >= bid; crossed quotes are dropped by the quality filter.
struct Quote {
    TimestampMs ts = 0;
    Price bid = 0;
    Price ask = 0;
    std::string source;
};

/// Executed trade print from one source.
struct Trade {
    TimestampMs ts = 0;
    Price price = 0;
    std::string source;
};

using TickEvent = std::variant<Quote, Trade>;

inline TimestampMs event_ts(const TickEvent& e) {
    return std::visit([](const auto& x) { return x.ts; }, e);
}

inline const std::string& event_source(const TickEvent& e) {
    return std::visit([](const auto& x) -> const std::string& { return x.source; }, e);
}

/// One-minute HLOC bar. `minute` indexes London local time, 0..1439, with
/// each bar centred at its minute.
struct MinuteBar {
    Date date;
    int minute = 0;
    Price open = 0;
    Price high = 0;
    Price low = 0;
    Price close = 0;

    bool valid() const {
        return low > 0 && low <= high && low <= open && open <= high && low <= close &&
               close <= high;
    }
};

enum class CurrencyClass { trade, quote };
enum class Methodology { pre2015, post2015 };

/// Per-pair fixing configuration. The fallback threshold and quality
/// tolerance are unpublished by the benchmark administrator and therefore
/// configurable; the defaults are documented in the README.
struct PairConfig {
    std::string pair;
    CurrencyClass currency_class = CurrencyClass::trade;
    Price standard_spread = 200'000; // S_S, 0.0002
    std::vector<std::string> sources{"SIM"};
    int fix_minute_local = 16 * 60; // minute-of-day, London local
    Methodology methodology = Methodology::pre2015;
    int min_trade_intervals = -1;   // <0: default to ceil(half the interval count)
    double quality_tolerance = 0.01;
    Price tick_size = 10'000;       // 0.00001
};

/// Data accumulation window around a fix. Snapshot i is taken at the end of
/// the i-th sampling interval, i.e. at center - half_width + i*sample_period;
/// the first snapshot falls on the window start.
struct FixWindow {
    TimestampMs center = 0;
    std::int64_t half_width_ms = 30'000;
    std::int64_t sample_period_ms = 1'000;

    int sample_count() const {
        return static_cast<int>(2 * half_width_ms / sample_period_ms) + 1;
    }
    TimestampMs interval_end(int i) const { return center - half_width_ms + i * sample_period_ms; }

    /// Window geometry for a pair configuration: +-30 s / 1 s sampling for
    /// trade currencies and +-60 s / 15 s for quote currencies pre-2015;
    /// +-150 s post-2015 (sampling periods unchanged).
    static FixWindow for_pair(const PairConfig& cfg, TimestampMs center);
};

/// Effective fallback threshold for a window (explicit value, or the
/// documented default of half the interval count, rounded up).
int effective_min_trade_intervals(const PairConfig& cfg, const FixWindow& window);

} // namespace wmr
