#pragma once

// Brute-force reference implementations, written independently of the
// library code paths they check. Values are held as exact fractions so the
// comparisons are decimal-exact.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wmr/analysis_centered.hpp"
#include "wmr/fix_engine.hpp"

namespace oracle {

using wmr::IntervalSnapshot;
using wmr::PairConfig;
using wmr::Price;

/// Exact rational in price units.
struct Frac {
    long long num = 0;
    long long den = 1;

    friend bool operator==(const Frac& a, const Frac& b) {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<(const Frac& a, const Frac& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
};

inline Frac frac_median(std::vector<Price> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return {v[n / 2], 1};
    return {v[n / 2 - 1] + v[n / 2], 2};
}

inline Frac frac_mid(const Frac& a, const Frac& b) {
    // (a + b) / 2 without reduction; exactness comes from cross-multiplied
    // comparison.
    return {a.num * b.den + b.num * a.den, 2 * a.den * b.den};
}

struct OracleFix {
    bool no_data = false;
    bool fallback = false;
    Frac mid;
    Frac spread_used;
    Frac market_spread;
    int n_trade_points = 0;
};

/// First-principles quote fix: medians of present bids/asks, their midpoint.
inline OracleFix quote_fix(const std::vector<IntervalSnapshot>& snaps) {
    std::vector<Price> bids, asks;
    long long spread_sum = 0;
    int spread_n = 0;
    for (const auto& s : snaps) {
        if (s.last_bid && s.last_ask) {
            bids.push_back(*s.last_bid);
            asks.push_back(*s.last_ask);
            spread_sum += *s.last_ask - *s.last_bid;
            ++spread_n;
        }
    }
    OracleFix r;
    if (bids.empty()) {
        r.no_data = true;
        return r;
    }
    const Frac mb = frac_median(bids);
    const Frac ma = frac_median(asks);
    r.mid = frac_mid(mb, ma);
    r.spread_used = {ma.num * mb.den - mb.num * ma.den, ma.den * mb.den};
    r.market_spread = spread_n > 0 ? Frac{spread_sum, spread_n} : Frac{0, 1};
    return r;
}

/// First-principles trade fix, rebuilding the bid/offer rate sets from the
/// classification rules as stated.
inline OracleFix trade_fix(const std::vector<IntervalSnapshot>& snaps, const PairConfig& cfg,
                           int sample_count) {
    std::vector<Price> bid_rates, offer_rates;
    long long spread_sum = 0;
    int spread_n = 0;
    for (const auto& s : snaps) {
        if (s.last_bid && s.last_ask) {
            spread_sum += *s.last_ask - *s.last_bid;
            ++spread_n;
        }
        if (!s.last_trade || !s.last_bid || !s.last_ask) continue;
        const Price bid = *s.last_bid, ask = *s.last_ask, px = *s.last_trade;
        const Price spread = ask - bid;
        if (px < bid || px > ask) continue; // outside the book
        enum { BidHit, OfferHit, Skip } what = Skip;
        if (px == bid)
            what = BidHit;
        else if (px == ask)
            what = OfferHit;
        else if (px - bid < ask - px)
            what = BidHit;
        else if (ask - px < px - bid)
            what = OfferHit;
        if (what == Skip) continue; // exact midpoint
        if (what == BidHit) {
            bid_rates.push_back(px);
            offer_rates.push_back(px + spread);
        } else {
            offer_rates.push_back(px);
            bid_rates.push_back(px - spread);
        }
    }

    const int threshold =
        cfg.min_trade_intervals >= 0 ? cfg.min_trade_intervals : (sample_count + 1) / 2;
    const int n_valid = static_cast<int>(bid_rates.size());
    if (n_valid == 0 || n_valid < threshold) {
        OracleFix r = quote_fix(snaps);
        r.fallback = true;
        return r;
    }

    OracleFix r;
    r.mid = frac_mid(frac_median(bid_rates), frac_median(offer_rates));
    r.market_spread = spread_n > 0 ? Frac{spread_sum, spread_n} : Frac{0, 1};
    const Frac standard{cfg.standard_spread, 1};
    r.spread_used = standard < r.market_spread ? r.market_spread : standard;
    r.n_trade_points = n_valid;
    return r;
}

/// Compare an engine result against the oracle, decimal-exact.
inline bool matches(const wmr::FixResult& engine, const OracleFix& o) {
    if (o.no_data) return false;
    if (engine.used_quote_fallback != o.fallback) return false;
    if (engine.n_trade_points != o.n_trade_points) return false;
    // engine mid = mid_4x / 4 price units.
    if (!(Frac{engine.mid_4x, 4} == o.mid)) return false;
    if (!(Frac{engine.spread_used.num, engine.spread_used.den} == o.spread_used)) return false;
    if (!(Frac{engine.market_spread.num, engine.market_spread.den} == o.market_spread))
        return false;
    return true;
}

/// Pointwise quality-filter rule: for each tick, rebuild the 15-second trade
/// samples and the trailing 40-sample median from scratch.
inline std::vector<wmr::TickEvent> quality_filter(const std::vector<wmr::TickEvent>& ticks,
                                                  double tolerance) {
    using wmr::Quote;
    using wmr::Trade;
    auto slot_of = [](wmr::TimestampMs ts) {
        return ts >= 0 ? ts / 15000 : (ts - 14999) / 15000;
    };
    // slot -> last positive trade price
    std::vector<std::pair<std::int64_t, Price>> samples;
    for (const auto& e : ticks)
        if (const Trade* t = std::get_if<Trade>(&e); t && t->price > 0) {
            const auto slot = slot_of(t->ts);
            if (!samples.empty() && samples.back().first == slot)
                samples.back().second = t->price;
            else
                samples.emplace_back(slot, t->price);
        }

    auto reference_at = [&](wmr::TimestampMs ts) -> std::optional<double> {
        const auto slot = slot_of(ts);
        std::vector<Price> recent;
        for (const auto& [s, p] : samples)
            if (s < slot) recent.push_back(p);
        if (recent.empty()) return std::nullopt;
        if (recent.size() > 40) recent.erase(recent.begin(), recent.end() - 40);
        std::sort(recent.begin(), recent.end());
        const std::size_t n = recent.size();
        return n % 2 == 1
                   ? wmr::to_rate(recent[n / 2])
                   : (wmr::to_rate(recent[n / 2 - 1]) + wmr::to_rate(recent[n / 2])) / 2.0;
    };

    std::vector<wmr::TickEvent> kept;
    for (const auto& e : ticks) {
        const auto ref = reference_at(wmr::event_ts(e));
        auto ok = [&](double rate) { return !ref || std::abs(rate - *ref) <= tolerance * *ref; };
        if (const Quote* q = std::get_if<Quote>(&e)) {
            if (q->bid <= 0 || q->ask <= 0 || q->ask < q->bid) continue;
            if (ok((wmr::to_rate(q->bid) + wmr::to_rate(q->ask)) / 2.0)) kept.push_back(e);
        } else {
            const Trade& t = std::get<Trade>(e);
            if (t.price <= 0) continue;
            if (ok(wmr::to_rate(t.price))) kept.push_back(e);
        }
    }
    return kept;
}

/// Exhaustive centred-window scan over explicit period returns (anchor's
/// zero return included as a candidate).
inline std::vector<wmr::CenteredEvent> centered_events(
    const std::array<double, wmr::kMinutesPerDay>& prices, int half_width) {
    std::vector<wmr::CenteredEvent> events;
    for (int tf = half_width; tf + half_width < wmr::kMinutesPerDay; ++tf) {
        const int anchor = tf - half_width;
        std::vector<double> returns;
        returns.push_back(0.0); // the anchor itself
        for (int t = anchor + 1; t <= tf + half_width; ++t)
            returns.push_back((prices[static_cast<std::size_t>(t)] -
                               prices[static_cast<std::size_t>(anchor)]) /
                              prices[static_cast<std::size_t>(anchor)]);
        const int center_idx = half_width;

        auto unique_at = [&](bool want_max) {
            const double c = returns[static_cast<std::size_t>(center_idx)];
            for (int i = 0; i < static_cast<int>(returns.size()); ++i) {
                if (i == center_idx) continue;
                const double v = returns[static_cast<std::size_t>(i)];
                if (want_max ? v >= c : v <= c) return false;
            }
            return true;
        };
        if (unique_at(true))
            events.push_back({tf, wmr::ExtremumKind::max,
                              std::abs(returns[static_cast<std::size_t>(center_idx)])});
        else if (unique_at(false))
            events.push_back({tf, wmr::ExtremumKind::min,
                              std::abs(returns[static_cast<std::size_t>(center_idx)])});
    }
    return events;
}

} // namespace oracle
