#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wmr/types.hpp"

namespace wmr {

/// Thrown when a fix cannot be computed because no usable quote or trade
/// data exists in the window.
struct NoDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Last events observed in one sampling interval. Bid and ask always travel
/// together (a quote carries both); `last_trade` is the last trade print.
/// Timestamps record when the retained events occurred, which drives both
/// snapshot-level source pooling and the most-recent-quote tie-break.
struct IntervalSnapshot {
    int interval_index = 0;
    std::optional<Price> last_bid;
    std::optional<Price> last_ask;
    std::optional<Price> last_trade;
    std::optional<TimestampMs> last_quote_ts;
    std::optional<TimestampMs> last_trade_ts;

    std::optional<Price> spread() const {
        if (last_bid && last_ask) return *last_ask - *last_bid;
        return std::nullopt;
    }
};

enum class TradeSide { bid, offer };
enum class TradeClass { bid_trade, offer_trade, excluded };

/// A trade attributed to one side of the book, with the opposite side
/// inferred by applying the interval spread.
struct ClassifiedTrade {
    TradeSide side = TradeSide::bid;
    Price actual_rate = 0;
    Price inferred_rate = 0;
};

/// Exact rational value in price units (num/den, den > 0). The market spread
/// is a mean of interval spreads and so generally not on the price grid.
struct SpreadValue {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double units() const { return static_cast<double>(num) / static_cast<double>(den); }
    double rate() const { return units() / static_cast<double>(kPriceScale); }

    friend bool operator==(const SpreadValue& a, const SpreadValue& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<(const SpreadValue& a, const SpreadValue& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
};

/// Computed benchmark rate with full provenance. The mid is held exactly in
/// quarter price units; medians of even sets halve once and the bid/ask
/// midpoint halves again.
struct FixResult {
    Price mid_4x = 0;
    SpreadValue spread_used;   // max(S_S, S_M) on the trade path, median ask - median bid on the quote path
    SpreadValue market_spread; // S_M: mean of interval spreads present in the window
    int spread_count = 0;      // intervals contributing to S_M
    int n_trade_points = 0;
    bool used_quote_fallback = false;
    std::string source_used;

    double mid() const { return static_cast<double>(mid_4x) / (4.0 * kPriceScale); }
    double fix_bid() const { return mid() - spread_used.rate() / 2.0; }
    double fix_ask() const { return mid() + spread_used.rate() / 2.0; }
};

/// Remove ticks inconsistent with the prevailing market level. The level is
/// the rolling median (window of 40 samples, 10 minutes) of trade rates
/// sampled at 15-second boundaries over the whole day; a tick is dropped when
/// its rate deviates from the level by more than `tolerance` (as a fraction
/// of the level). Crossed or non-positive quotes and non-positive trades are
/// dropped unconditionally. Ticks seen before any reference exists are kept.
std::vector<TickEvent> quality_filter(std::span<const TickEvent> ticks, double tolerance);

/// Capture the last valid quote pair and last trade in each sampling
/// interval. Input must be time-ordered and quality-filtered.
std::vector<IntervalSnapshot> sample_intervals(std::span<const TickEvent> ticks,
                                               const FixWindow& window);

/// Attribute a trade to the side of the book it hit. Trades at the bid or
/// ask are bid/offer trades; trades outside the quotes and trades at the
/// exact midpoint are excluded; interior trades go to the strictly nearer
/// side.
TradeClass classify_trade(Price trade_price, Price bid, Price ask);

/// Apply the interval spread to infer the opposite-side rate.
ClassifiedTrade infer_opposite(Price trade_price, TradeSide side, Price spread);

/// Quote-currency fix: medians of the captured bids and asks, mid-price
/// between them. Throws NoDataError when no interval has a quote pair.
FixResult compute_quote_fix(std::span<const IntervalSnapshot> snapshots);

/// Trade-currency fix over one window of snapshots. Classifies each
/// interval's trade, infers the opposite side, and takes the mid-price of
/// the bid-set and offer-set medians. Falls back to the quote fix when
/// fewer than the configured number of intervals hold a valid trade.
FixResult compute_trade_fix(std::span<const IntervalSnapshot> snapshots, const PairConfig& cfg,
                            const FixWindow& window);

using SourceSnapshots = std::vector<std::pair<std::string, std::vector<IntervalSnapshot>>>;

/// Multi-source fix. The primary path pools all sources (per interval, the
/// latest event wins; later-listed sources win timestamp ties). On quote
/// fallback the source with the most valid quote snapshots is used alone;
/// sources tied at a single quote snapshot resolve to the most recent quote
/// update, larger ties average the per-source fixes.
FixResult select_source(const SourceSnapshots& per_source, const PairConfig& cfg,
                        const FixWindow& window);

} // namespace wmr
