#pragma once

// Shared builders for the test suites.

#include <random>
#include <string>
#include <vector>

#include "wmr/pipeline.hpp"

namespace testsup {

using namespace wmr;

inline Price P(const std::string& s) { return parse_price(s); }

inline TickEvent mk_quote(TimestampMs ts, const std::string& bid, const std::string& ask,
                          std::string source = "S") {
    return Quote{ts, P(bid), P(ask), std::move(source)};
}

inline TickEvent mk_trade(TimestampMs ts, const std::string& price, std::string source = "S") {
    return Trade{ts, P(price), std::move(source)};
}

inline bool events_equal(const TickEvent& a, const TickEvent& b) {
    if (a.index() != b.index()) return false;
    if (const Quote* qa = std::get_if<Quote>(&a)) {
        const Quote& qb = std::get<Quote>(b);
        return qa->ts == qb.ts && qa->bid == qb.bid && qa->ask == qb.ask && qa->source == qb.source;
    }
    const Trade& ta = std::get<Trade>(a);
    const Trade& tb = std::get<Trade>(b);
    return ta.ts == tb.ts && ta.price == tb.price && ta.source == tb.source;
}

inline bool streams_equal(const std::vector<TickEvent>& a, const std::vector<TickEvent>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!events_equal(a[i], b[i])) return false;
    return true;
}

/// Day of identical bars.
inline DayBars flat_day(const Date& date, const std::string& price) {
    DayBars day;
    day.date = date;
    const Price p = P(price);
    for (int m = 0; m < kMinutesPerDay; ++m) day.bars.push_back(MinuteBar{date, m, p, p, p, p});
    return day;
}

/// Day whose four streams all equal the given per-minute rates.
inline DayBars day_from_rates(const Date& date, const std::vector<double>& rates) {
    DayBars day;
    day.date = date;
    for (int m = 0; m < kMinutesPerDay; ++m) {
        const Price p = price_from_rate(rates[static_cast<std::size_t>(m)]);
        day.bars.push_back(MinuteBar{date, m, p, p, p, p});
    }
    return day;
}

/// Random-walk day on a price grid; high/low get a random intraminute range.
inline DayBars random_day(std::mt19937& rng, const Date& date, double base = 1.3,
                          double step = 1e-4, double range = 2e-4) {
    std::normal_distribution<double> nd(0.0, step);
    std::uniform_real_distribution<double> ud(0.0, range);
    DayBars day;
    day.date = date;
    double level = base;
    const Price tick = 10'000; // 0.00001
    for (int m = 0; m < kMinutesPerDay; ++m) {
        level *= 1.0 + nd(rng);
        const double r = ud(rng);
        const Price close = round_to_grid(price_from_rate(level), tick);
        const Price open = round_to_grid(price_from_rate(level * (1.0 - r / 2)), tick);
        Price high = round_to_grid(price_from_rate(level * (1.0 + r)), tick);
        Price low = round_to_grid(price_from_rate(level * (1.0 - r)), tick);
        high = std::max({high, open, close});
        low = std::min({low, open, close});
        day.bars.push_back(MinuteBar{date, m, open, high, low, close});
    }
    return day;
}

inline Dataset make_dataset(std::vector<DayBars> days, std::string pair = "TEST") {
    Dataset ds;
    ds.pair = std::move(pair);
    ds.days = std::move(days);
    return ds;
}

inline Dataset random_dataset(std::mt19937& rng, int day_count, double base = 1.3) {
    std::vector<DayBars> days;
    Date date{2012, 1, 2};
    for (int d = 0; d < day_count; ++d) {
        days.push_back(random_day(rng, date));
        date = add_days(date, 1);
    }
    return make_dataset(std::move(days));
}

/// Randomized snapshot window on a 0.0001 grid with configurable fill rates.
inline std::vector<IntervalSnapshot> random_snapshots(std::mt19937& rng, int count,
                                                      double p_quote = 0.8,
                                                      double p_trade = 0.7) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> level(-40, 40);
    std::uniform_int_distribution<int> width(0, 8);
    std::uniform_int_distribution<int> at(-6, 6);
    const Price grid = P("0.0001");
    const Price base = P("1.2000");
    std::vector<IntervalSnapshot> snaps(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        auto& s = snaps[static_cast<std::size_t>(i)];
        s.interval_index = i;
        const Price mid = base + level(rng) * grid;
        if (u(rng) < p_quote) {
            const Price half = width(rng) * grid;
            s.last_bid = mid - half;
            s.last_ask = mid + half;
            s.last_quote_ts = 1'000'000 + i * 1000 + static_cast<int>(u(rng) * 999);
        }
        if (u(rng) < p_trade) {
            s.last_trade = mid + at(rng) * grid;
            s.last_trade_ts = 1'000'000 + i * 1000 + static_cast<int>(u(rng) * 999);
        }
    }
    return snaps;
}

} // namespace testsup
