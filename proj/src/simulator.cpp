#include "wmr/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace wmr {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t day_stream_seed(std::uint64_t seed, int day_index, std::uint64_t stream_tag) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    std::uint64_t mixed = a ^ (static_cast<std::uint64_t>(day_index) * 0xD1B54A32D192ED03ull) ^
                          (stream_tag * 0x8CB92BA72F3D8DD7ull);
    return splitmix64(mixed);
}

double SimRng::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double SimRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

int SimRng::poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda > 30.0) {
        // Normal approximation; adequate for simulated arrival bursts.
        double v = lambda + std::sqrt(lambda) * normal();
        return v <= 0.0 ? 0 : static_cast<int>(std::llround(v));
    }
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform();
    } while (p > limit);
    return k - 1;
}

int SimRng::uniform_int(int lo, int hi) {
    const int span = hi - lo + 1;
    int v = lo + static_cast<int>(uniform() * span);
    return v > hi ? hi : v;
}

Date scenario_date(const SimScenario& scenario, int day_index) {
    return add_days(scenario.start_date, day_index);
}

TimestampMs scenario_fix_center(const SimScenario& scenario, int day_index) {
    const Date date = scenario_date(scenario, day_index);
    return london_day_start_ms(date) + scenario.fix_minute_local * kMsPerMinute;
}

std::vector<TickEvent> gen_day(const SimScenario& scenario, int day_index) {
    // Separate substreams so that toggling manipulation or the daily
    // direction coin leaves the market activity stream untouched.
    SimRng market(day_stream_seed(scenario.seed, day_index, 0));
    SimRng direction_rng(day_stream_seed(scenario.seed, day_index, 1));

    const Date date = scenario_date(scenario, day_index);
    const TimestampMs t0 = london_day_start_ms(date);
    const TimestampMs center = t0 + scenario.fix_minute_local * kMsPerMinute;
    const TimestampMs window_start = center - scenario.window_half_width_ms;
    const TimestampMs window_end = center + scenario.window_half_width_ms;
    const TimestampMs flow_start = window_start - scenario.flow_lead_ms;

    int day_direction = 1;
    if (scenario.daily_random_direction) day_direction = direction_rng.uniform() < 0.5 ? 1 : -1;
    const double imbalance = std::clamp(scenario.flow_imbalance * day_direction, -1.0, 1.0);

    const Price spread_units = price_from_rate(scenario.base_spread);
    const double decay = scenario.impact_reversion_s > 0.0
                             ? std::exp(-1.0 / scenario.impact_reversion_s)
                             : 1.0;
    const bool manipulate = scenario.manipulation == Manipulation::end_of_interval &&
                            scenario.manipulation_size > 0;
    const int manip_size =
        std::min<int>(scenario.manipulation_size,
                      static_cast<int>(std::max<std::int64_t>(scenario.manipulation_tail_ms, 1)));

    std::vector<TickEvent> events;
    events.reserve(static_cast<std::size_t>(86400.0 * (1.2 + scenario.tick_rate)));

    double walk = scenario.base_price;
    double pressure = 0.0;

    for (int sec = 0; sec < 86400; ++sec) {
        const TimestampMs ts = t0 + static_cast<TimestampMs>(sec) * kMsPerSecond;
        if (scenario.step_vol > 0.0) walk *= 1.0 + scenario.step_vol * market.normal();
        pressure *= decay;

        Price mid = round_to_grid(price_from_rate(walk * (1.0 + pressure)), scenario.tick_size);
        if (mid < scenario.tick_size) mid = scenario.tick_size;
        Price bid = round_to_grid(mid - spread_units / 2, scenario.tick_size);
        if (bid < scenario.tick_size) bid = scenario.tick_size;
        Price ask = round_to_grid(mid + spread_units / 2, scenario.tick_size);
        if (ask < bid) ask = bid;
        events.emplace_back(Quote{ts, bid, ask, scenario.source});

        const bool in_flow = ts >= flow_start && ts < window_end;
        const double rate =
            scenario.tick_rate * (in_flow ? scenario.compression_factor : 1.0);
        const int n_trades = market.poisson(rate);
        int net_direction = 0;
        const double p_buy = 0.5 * (1.0 + (in_flow ? imbalance : 0.0));
        for (int j = 0; j < n_trades; ++j) {
            const TimestampMs tms = ts + market.uniform_int(0, 999);
            const bool buy = market.uniform() < p_buy;
            events.emplace_back(Trade{tms, buy ? ask : bid, scenario.source});
            net_direction += buy ? 1 : -1;
        }

        // Split-order manipulation: directional trades in the tail of each
        // 1-s aggregation interval inside the fixing window.
        const TimestampMs interval_end = ts + kMsPerSecond;
        if (manipulate && interval_end >= window_start && interval_end <= window_end &&
            (interval_end - window_start) % kMsPerSecond == 0) {
            const Price px = scenario.manipulation_direction > 0 ? ask : bid;
            for (int j = 0; j < manip_size; ++j)
                events.emplace_back(Trade{interval_end - (manip_size - j), px, scenario.source});
            net_direction += scenario.manipulation_direction * manip_size;
        }

        // Book depletion: net one-sided flow displaces the mid from the next
        // second on; the displacement relaxes as the book refills.
        pressure += scenario.impact_per_trade * net_direction;
    }

    std::stable_sort(events.begin(), events.end(), [](const TickEvent& a, const TickEvent& b) {
        return event_ts(a) < event_ts(b);
    });
    return events;
}

std::vector<MinuteBar> ticks_to_bars(std::span<const TickEvent> ticks, const Date& date) {
    const TimestampMs t0 = london_day_start_ms(date);
    struct Acc {
        Price open = 0, high = 0, low = 0, close = 0;
        bool seen = false;
    };
    std::array<Acc, kMinutesPerDay> acc{};

    for (const auto& e : ticks) {
        const Trade* t = std::get_if<Trade>(&e);
        if (!t) continue;
        const std::int64_t shifted = t->ts - t0 + 30'000; // bars centred at the minute
        if (shifted < 0) continue;
        const std::int64_t minute = shifted / kMsPerMinute;
        if (minute >= kMinutesPerDay) continue;
        Acc& a = acc[static_cast<std::size_t>(minute)];
        if (!a.seen) {
            a = Acc{t->price, t->price, t->price, t->price, true};
        } else {
            a.high = std::max(a.high, t->price);
            a.low = std::min(a.low, t->price);
            a.close = t->price;
        }
    }

    std::vector<MinuteBar> bars;
    for (int m = 0; m < kMinutesPerDay; ++m) {
        const Acc& a = acc[static_cast<std::size_t>(m)];
        if (a.seen) bars.push_back(MinuteBar{date, m, a.open, a.high, a.low, a.close});
    }
    return bars;
}

} // namespace wmr
