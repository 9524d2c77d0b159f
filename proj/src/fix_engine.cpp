#include "wmr/fix_engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace wmr {

namespace {

// Twice the median, which is always an integer: the sum of the two middle
// elements for even sizes, twice the middle element for odd sizes.
Price median_2x(std::vector<Price> values) {
    assert(!values.empty());
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return 2 * values[n / 2];
    return values[n / 2 - 1] + values[n / 2];
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

SpreadValue reduce(std::int64_t num, std::int64_t den) {
    std::int64_t g = gcd64(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return SpreadValue{num, den};
}

// Mean spread over the intervals that carry a quote pair; {0,1} when none do.
std::pair<SpreadValue, int> mean_interval_spread(std::span<const IntervalSnapshot> snapshots) {
    std::int64_t sum = 0;
    int count = 0;
    for (const auto& s : snapshots) {
        if (auto sp = s.spread()) {
            sum += *sp;
            ++count;
        }
    }
    if (count == 0) return {SpreadValue{0, 1}, 0};
    return {reduce(sum, count), count};
}

int count_valid_trades(std::span<const IntervalSnapshot> snapshots) {
    int n = 0;
    for (const auto& s : snapshots) {
        if (!s.last_trade || !s.last_bid || !s.last_ask) continue;
        if (classify_trade(*s.last_trade, *s.last_bid, *s.last_ask) != TradeClass::excluded) ++n;
    }
    return n;
}

Price divide_round_half_even(std::int64_t num, std::int64_t den) {
    assert(den > 0);
    std::int64_t q = floor_div(num, den);
    std::int64_t r = num - q * den;
    if (2 * r > den || (2 * r == den && (q % 2 != 0))) ++q;
    return q;
}

} // namespace

std::vector<TickEvent> quality_filter(std::span<const TickEvent> ticks, double tolerance) {
    constexpr std::int64_t kSlotMs = 15'000;
    constexpr std::size_t kRollingWindow = 40; // 10 minutes of 15-second samples

    // Market-level surveillance series: the last trade rate in each
    // 15-second slot, taken from the raw stream (the rolling median is what
    // makes the reference robust to the outliers being filtered).
    std::vector<std::pair<std::int64_t, Price>> samples;
    for (const auto& e : ticks) {
        if (const Trade* t = std::get_if<Trade>(&e); t && t->price > 0) {
            std::int64_t slot = floor_div(t->ts, kSlotMs);
            if (!samples.empty() && samples.back().first == slot)
                samples.back().second = t->price;
            else
                samples.emplace_back(slot, t->price);
        }
    }

    std::vector<TickEvent> kept;
    kept.reserve(ticks.size());

    std::size_t next_sample = 0; // samples with slot < current tick slot
    std::size_t ref_for = 0;     // next_sample value the cached median was built for
    double reference = 0.0;
    bool have_reference = false;
    std::vector<Price> window_buf;

    auto update_reference = [&](std::int64_t tick_slot) {
        while (next_sample < samples.size() && samples[next_sample].first < tick_slot)
            ++next_sample;
        if (next_sample == 0) {
            have_reference = false;
            return;
        }
        if (have_reference && next_sample == ref_for) return;
        std::size_t lo = next_sample > kRollingWindow ? next_sample - kRollingWindow : 0;
        window_buf.clear();
        for (std::size_t i = lo; i < next_sample; ++i) window_buf.push_back(samples[i].second);
        std::sort(window_buf.begin(), window_buf.end());
        const std::size_t n = window_buf.size();
        reference = n % 2 == 1 ? to_rate(window_buf[n / 2])
                               : (to_rate(window_buf[n / 2 - 1]) + to_rate(window_buf[n / 2])) / 2.0;
        have_reference = true;
        ref_for = next_sample;
    };

    auto consistent = [&](double rate) {
        if (!have_reference) return true;
        return std::abs(rate - reference) <= tolerance * reference;
    };

    for (const auto& e : ticks) {
        update_reference(floor_div(event_ts(e), kSlotMs));
        if (const Quote* q = std::get_if<Quote>(&e)) {
            if (q->bid <= 0 || q->ask <= 0 || q->ask < q->bid) continue;
            double mid = (to_rate(q->bid) + to_rate(q->ask)) / 2.0;
            if (consistent(mid)) kept.push_back(e);
        } else {
            const Trade& t = std::get<Trade>(e);
            if (t.price <= 0) continue;
            if (consistent(to_rate(t.price))) kept.push_back(e);
        }
    }
    return kept;
}

std::vector<IntervalSnapshot> sample_intervals(std::span<const TickEvent> ticks,
                                               const FixWindow& window) {
    const int count = window.sample_count();
    std::vector<IntervalSnapshot> snapshots(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) snapshots[static_cast<std::size_t>(i)].interval_index = i;

    const TimestampMs start = window.center - window.half_width_ms;
    for (const auto& e : ticks) {
        const TimestampMs ts = event_ts(e);
        const std::int64_t offset = ts - start;
        // Interval i covers (end_{i-1}, end_i] with end_i = start + i*period;
        // interval 0 additionally reaches one period before the window start.
        std::int64_t i = offset <= 0 ? (offset > -window.sample_period_ms ? 0 : -1)
                                     : (offset + window.sample_period_ms - 1) / window.sample_period_ms;
        if (i < 0 || i >= count) continue;
        auto& snap = snapshots[static_cast<std::size_t>(i)];
        if (const Quote* q = std::get_if<Quote>(&e)) {
            snap.last_bid = q->bid;
            snap.last_ask = q->ask;
            snap.last_quote_ts = ts;
        } else {
            const Trade& t = std::get<Trade>(e);
            snap.last_trade = t.price;
            snap.last_trade_ts = ts;
        }
    }
    return snapshots;
}

TradeClass classify_trade(Price trade_price, Price bid, Price ask) {
    if (trade_price == bid) return TradeClass::bid_trade;
    if (trade_price == ask) return TradeClass::offer_trade;
    if (trade_price < bid || trade_price > ask) return TradeClass::excluded;
    const Price to_bid = trade_price - bid;
    const Price to_ask = ask - trade_price;
    if (to_bid == to_ask) return TradeClass::excluded; // exact midpoint
    return to_bid < to_ask ? TradeClass::bid_trade : TradeClass::offer_trade;
}

ClassifiedTrade infer_opposite(Price trade_price, TradeSide side, Price spread) {
    ClassifiedTrade ct;
    ct.side = side;
    ct.actual_rate = trade_price;
    ct.inferred_rate = side == TradeSide::bid ? trade_price + spread : trade_price - spread;
    return ct;
}

FixResult compute_quote_fix(std::span<const IntervalSnapshot> snapshots) {
    std::vector<Price> bids, asks;
    for (const auto& s : snapshots) {
        if (s.last_bid && s.last_ask) {
            bids.push_back(*s.last_bid);
            asks.push_back(*s.last_ask);
        }
    }
    if (bids.empty()) throw NoDataError("no quote data in any sampling interval");

    const Price m2_bid = median_2x(bids);
    const Price m2_ask = median_2x(asks);

    FixResult r;
    r.mid_4x = m2_bid + m2_ask;
    r.spread_used = reduce(m2_ask - m2_bid, 2);
    std::tie(r.market_spread, r.spread_count) = mean_interval_spread(snapshots);
    r.n_trade_points = 0;
    return r;
}

FixResult compute_trade_fix(std::span<const IntervalSnapshot> snapshots, const PairConfig& cfg,
                            const FixWindow& window) {
    std::vector<Price> bid_set, offer_set;
    int n_valid = 0;
    for (const auto& s : snapshots) {
        // An interval with a trade but no quote pair has no spread to infer
        // the opposite side with; its trade is dropped.
        if (!s.last_trade || !s.last_bid || !s.last_ask) continue;
        const TradeClass cls = classify_trade(*s.last_trade, *s.last_bid, *s.last_ask);
        if (cls == TradeClass::excluded) continue;
        const Price spread = *s.last_ask - *s.last_bid;
        const TradeSide side = cls == TradeClass::bid_trade ? TradeSide::bid : TradeSide::offer;
        const ClassifiedTrade ct = infer_opposite(*s.last_trade, side, spread);
        if (side == TradeSide::bid) {
            bid_set.push_back(ct.actual_rate);
            offer_set.push_back(ct.inferred_rate);
        } else {
            offer_set.push_back(ct.actual_rate);
            bid_set.push_back(ct.inferred_rate);
        }
        ++n_valid;
    }

    const int threshold = effective_min_trade_intervals(cfg, window);
    if (n_valid == 0 || n_valid < threshold) {
        FixResult r = compute_quote_fix(snapshots); // throws NoDataError when quotes are absent too
        r.used_quote_fallback = true;
        return r;
    }

    FixResult r;
    r.mid_4x = median_2x(std::move(bid_set)) + median_2x(std::move(offer_set));
    std::tie(r.market_spread, r.spread_count) = mean_interval_spread(snapshots);
    const SpreadValue standard{cfg.standard_spread, 1};
    r.spread_used = standard < r.market_spread ? r.market_spread : standard;
    r.n_trade_points = n_valid;
    return r;
}

namespace {

std::vector<IntervalSnapshot> pool_snapshots(const SourceSnapshots& per_source, int count) {
    std::vector<IntervalSnapshot> pooled(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pooled[static_cast<std::size_t>(i)].interval_index = i;
    // Later-listed sources win timestamp ties, matching the order a merged
    // stream would present equal-timestamp events in.
    for (const auto& [name, snaps] : per_source) {
        for (int i = 0; i < count; ++i) {
            const auto& s = snaps[static_cast<std::size_t>(i)];
            auto& p = pooled[static_cast<std::size_t>(i)];
            if (s.last_quote_ts && (!p.last_quote_ts || *s.last_quote_ts >= *p.last_quote_ts)) {
                p.last_bid = s.last_bid;
                p.last_ask = s.last_ask;
                p.last_quote_ts = s.last_quote_ts;
            }
            if (s.last_trade_ts && (!p.last_trade_ts || *s.last_trade_ts >= *p.last_trade_ts)) {
                p.last_trade = s.last_trade;
                p.last_trade_ts = s.last_trade_ts;
            }
        }
    }
    return pooled;
}

int valid_quote_count(const std::vector<IntervalSnapshot>& snaps) {
    int n = 0;
    for (const auto& s : snaps)
        if (s.last_bid && s.last_ask) ++n;
    return n;
}

TimestampMs newest_quote_ts(const std::vector<IntervalSnapshot>& snaps) {
    TimestampMs newest = INT64_MIN;
    for (const auto& s : snaps)
        if (s.last_quote_ts) newest = std::max(newest, *s.last_quote_ts);
    return newest;
}

} // namespace

FixResult select_source(const SourceSnapshots& per_source, const PairConfig& cfg,
                        const FixWindow& window) {
    if (per_source.empty()) throw NoDataError("no sources supplied");
    const int count = window.sample_count();
    for (const auto& [name, snaps] : per_source)
        if (static_cast<int>(snaps.size()) != count)
            throw std::invalid_argument("select_source: snapshot count mismatch for source " + name);

    const std::vector<IntervalSnapshot> pooled = pool_snapshots(per_source, count);
    const int n_valid = count_valid_trades(pooled);
    if (n_valid > 0 && n_valid >= effective_min_trade_intervals(cfg, window)) {
        FixResult r = compute_trade_fix(pooled, cfg, window);
        r.source_used = per_source.size() == 1 ? per_source.front().first : "pooled";
        return r;
    }

    // Quote fallback: quote data is not pooled; the source with the most
    // valid quote snapshots is used on its own.
    int best = 0;
    for (const auto& [name, snaps] : per_source) best = std::max(best, valid_quote_count(snaps));
    if (best == 0) throw NoDataError("no quote data in any source");

    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < per_source.size(); ++i)
        if (valid_quote_count(per_source[i].second) == best) tied.push_back(i);

    if (tied.size() == 1 || best == 1) {
        std::size_t chosen = tied.front();
        if (tied.size() > 1) {
            // A single quote datapoint reported by several sources: take the
            // source with the most recent quote update.
            TimestampMs newest = INT64_MIN;
            for (std::size_t i : tied) {
                TimestampMs ts = newest_quote_ts(per_source[i].second);
                if (ts >= newest) {
                    newest = ts;
                    chosen = i;
                }
            }
        }
        FixResult r = compute_quote_fix(per_source[chosen].second);
        r.used_quote_fallback = true;
        r.source_used = per_source[chosen].first;
        return r;
    }

    // Equal quote coverage: fix each source individually and average.
    std::int64_t mid_sum = 0;
    std::int64_t spread_num = 0, spread_den = 1;
    std::int64_t sm_sum = 0;
    int sm_count = 0;
    for (std::size_t i : tied) {
        const FixResult f = compute_quote_fix(per_source[i].second);
        mid_sum += f.mid_4x;
        // spread_num/spread_den += f.spread_used
        spread_num = spread_num * f.spread_used.den + f.spread_used.num * spread_den;
        spread_den *= f.spread_used.den;
        const SpreadValue red = reduce(spread_num, spread_den);
        spread_num = red.num;
        spread_den = red.den;
        for (const auto& s : per_source[i].second) {
            if (auto sp = s.spread()) {
                sm_sum += *sp;
                ++sm_count;
            }
        }
    }
    const auto k = static_cast<std::int64_t>(tied.size());
    FixResult r;
    r.mid_4x = divide_round_half_even(mid_sum, k);
    r.spread_used = reduce(spread_num, spread_den * k);
    r.market_spread = sm_count > 0 ? reduce(sm_sum, sm_count) : SpreadValue{0, 1};
    r.spread_count = sm_count;
    r.n_trade_points = 0;
    r.used_quote_fallback = true;
    r.source_used = "averaged";
    return r;
}

} // namespace wmr
