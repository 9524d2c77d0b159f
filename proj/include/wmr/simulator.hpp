#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wmr/types.hpp"

namespace wmr {

enum class Manipulation { off, end_of_interval };

/// Synthetic market scenario. Each day is generated from its own RNG stream
/// derived from (seed, day_index), so day generation is order-independent
/// and reproducible.
///
/// The mid follows a discrete random walk with per-second return stddev
/// `step_vol`; quotes straddle it by `base_spread` once per second; trades
/// arrive Poisson at `tick_rate` per second and hit the bid or ask.
///
/// Inside the flow window (the fixing window widened backwards by
/// `flow_lead_ms`, fixing flow starts before the window opens) the arrival
/// rate is scaled by `compression_factor` and trade direction is biased by
/// `flow_imbalance`. Directional trades displace the mid by
/// `impact_per_trade` (order-book depletion); the displacement decays with
/// time constant `impact_reversion_s` as the book refills.
struct SimScenario {
    std::uint64_t seed = 1;
    int day_count = 1;
    Date start_date{2012, 1, 2};
    double base_price = 1.3;
    double step_vol = 2e-5;
    double base_spread = 2e-4;
    double tick_rate = 1.0;
    int fix_minute_local = 16 * 60;
    std::int64_t window_half_width_ms = 30'000;

    double compression_factor = 1.0;
    double flow_imbalance = 0.0;      // [-1, 1]
    bool daily_random_direction = false; // coin-flip the imbalance sign per day
    std::int64_t flow_lead_ms = 30'000;
    double impact_per_trade = 0.0;    // return units per trade, signed by direction
    double impact_reversion_s = 120.0; // <= 0 keeps the displacement permanent

    Manipulation manipulation = Manipulation::off;
    int manipulation_size = 0;        // trades placed in the tail of each 1-s interval
    int manipulation_direction = 1;   // +1 buy, -1 sell
    std::int64_t manipulation_tail_ms = 100;

    Price tick_size = 10'000;         // 0.00001
    std::string source = "SIM";
};

/// Portable deterministic generator: mt19937_64 streams seeded via
/// splitmix64, with hand-rolled uniform/normal/Poisson transforms so the
/// byte stream does not depend on the standard library's distribution
/// implementations.
class SimRng {
public:
    explicit SimRng(std::uint64_t seed) : eng_(seed) {}

    double uniform();              // [0, 1)
    double normal();               // standard normal (Box-Muller)
    int poisson(double lambda);
    int uniform_int(int lo, int hi); // inclusive

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// RNG stream for one day of one scenario; `stream_tag` separates independent
/// substreams (market activity vs. day-direction draws).
std::uint64_t day_stream_seed(std::uint64_t seed, int day_index, std::uint64_t stream_tag);

Date scenario_date(const SimScenario& scenario, int day_index);

/// Fixing window centre for a simulated day (fix_minute_local on the London
/// local clock).
TimestampMs scenario_fix_center(const SimScenario& scenario, int day_index);

/// Generate one simulated day of ticks, time-ordered. Deterministic for a
/// fixed (scenario.seed, day_index).
std::vector<TickEvent> gen_day(const SimScenario& scenario, int day_index);

/// Aggregate trades into per-minute HLOC bars (bars centred at the minute;
/// minutes without trades are omitted).
std::vector<MinuteBar> ticks_to_bars(std::span<const TickEvent> ticks, const Date& date);

} // namespace wmr
