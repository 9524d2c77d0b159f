#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace wmr;
using namespace testsup;

namespace {

FixWindow window_for(int sample_count, TimestampMs center = 1'000'000,
                     std::int64_t period = 1'000) {
    // 2*half/period + 1 == count
    return FixWindow{center, (sample_count - 1) * period / 2, period};
}

IntervalSnapshot snap(int idx, std::optional<const char*> bid, std::optional<const char*> ask,
                      std::optional<const char*> trade) {
    IntervalSnapshot s;
    s.interval_index = idx;
    if (bid) {
        s.last_bid = P(*bid);
        s.last_ask = P(*ask);
        s.last_quote_ts = 1'000 * idx;
    }
    if (trade) {
        s.last_trade = P(*trade);
        s.last_trade_ts = 1'000 * idx + 500;
    }
    return s;
}

} // namespace

TEST_CASE("classify_trade at-quote, interior, outside and midpoint") {
    CHECK(classify_trade(P("1.1000"), P("1.1000"), P("1.1002")) == TradeClass::bid_trade);
    CHECK(classify_trade(P("1.1002"), P("1.1000"), P("1.1002")) == TradeClass::offer_trade);
    CHECK(classify_trade(P("1.0999"), P("1.1000"), P("1.1002")) == TradeClass::excluded);
    CHECK(classify_trade(P("1.1003"), P("1.1000"), P("1.1002")) == TradeClass::excluded);
    // Exact midpoint is excluded.
    CHECK(classify_trade(P("1.1001"), P("1.1000"), P("1.1002")) == TradeClass::excluded);
    // Interior trades classify to the strictly nearer side.
    CHECK(classify_trade(P("1.1001"), P("1.1000"), P("1.1004")) == TradeClass::bid_trade);
    CHECK(classify_trade(P("1.1003"), P("1.1000"), P("1.1004")) == TradeClass::offer_trade);
}

TEST_CASE("infer_opposite applies the interval spread") {
    auto ct = infer_opposite(P("1.2000"), TradeSide::bid, P("0.0004"));
    CHECK(ct.inferred_rate == P("1.2004"));
    ct = infer_opposite(P("1.2004"), TradeSide::offer, P("0.0004"));
    CHECK(ct.inferred_rate == P("1.2000"));
    ct = infer_opposite(P("1.2000"), TradeSide::bid, 0);
    CHECK(ct.inferred_rate == P("1.2000"));
}

TEST_CASE("inferred-rate invariant holds for random classified trades") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> grid(-50, 50);
    std::uniform_int_distribution<int> sp(0, 10);
    for (int i = 0; i < 500; ++i) {
        const Price px = P("1.2") + grid(rng) * P("0.0001");
        const Price spread = sp(rng) * P("0.0001");
        const auto side = i % 2 == 0 ? TradeSide::bid : TradeSide::offer;
        const auto ct = infer_opposite(px, side, spread);
        if (side == TradeSide::bid)
            CHECK(ct.inferred_rate == ct.actual_rate + spread);
        else
            CHECK(ct.inferred_rate == ct.actual_rate - spread);
    }
}

TEST_CASE("sample_intervals fills 61 snapshots, last event wins") {
    const FixWindow w = window_for(61);
    std::vector<TickEvent> ticks;
    for (int i = 0; i < 61; ++i) {
        const TimestampMs end = w.interval_end(i);
        ticks.push_back(mk_quote(end - 700, "1.2000", "1.2004"));
        ticks.push_back(mk_trade(end - 300, "1.2000"));
    }
    const auto snaps = sample_intervals(ticks, w);
    REQUIRE(snaps.size() == 61);
    for (const auto& s : snaps) {
        CHECK(*s.last_bid == P("1.2000"));
        CHECK(*s.last_trade == P("1.2000"));
        CHECK(*s.spread() == P("0.0004"));
    }

    SUBCASE("empty stream yields all-absent snapshots") {
        const auto empty = sample_intervals(std::vector<TickEvent>{}, w);
        REQUIRE(empty.size() == 61);
        for (const auto& s : empty) {
            CHECK(!s.last_bid);
            CHECK(!s.last_trade);
            CHECK(!s.spread());
        }
    }
}

TEST_CASE("two quotes in the same interval keep the later one") {
    const FixWindow w = window_for(61);
    std::vector<TickEvent> ticks{mk_quote(w.interval_end(5) - 800, "1.1000", "1.1004"),
                                 mk_quote(w.interval_end(5) - 100, "1.1001", "1.1005")};
    const auto snaps = sample_intervals(ticks, w);
    CHECK(*snaps[5].last_bid == P("1.1001"));
    CHECK(*snaps[5].last_ask == P("1.1005"));
}

TEST_CASE("interval boundaries are right-closed and the window edges bound them") {
    const FixWindow w = window_for(61);
    std::vector<TickEvent> ticks{
        mk_trade(w.interval_end(0), "1.0001"),               // exactly at the window start
        mk_trade(w.interval_end(3), "1.0002"),               // boundary belongs to interval 3
        mk_trade(w.interval_end(3) + 1, "1.0003"),           // first ms of interval 4
        mk_trade(w.interval_end(60), "1.0004"),              // window end, included
        mk_trade(w.interval_end(60) + 1, "1.0005"),          // past the window, dropped
        mk_trade(w.interval_end(0) - w.sample_period_ms, "1.0006"), // too early, dropped
    };
    std::stable_sort(ticks.begin(), ticks.end(),
                     [](const TickEvent& a, const TickEvent& b) { return event_ts(a) < event_ts(b); });
    const auto snaps = sample_intervals(ticks, w);
    CHECK(*snaps[0].last_trade == P("1.0001"));
    CHECK(*snaps[3].last_trade == P("1.0002"));
    CHECK(*snaps[4].last_trade == P("1.0003"));
    CHECK(*snaps[60].last_trade == P("1.0004"));
    int populated = 0;
    for (const auto& s : snaps)
        if (s.last_trade) ++populated;
    CHECK(populated == 4);
}

TEST_CASE("single-interval trade fix: every step forced") {
    PairConfig cfg;
    cfg.standard_spread = P("0.0002");
    cfg.min_trade_intervals = 1;
    const FixWindow w = window_for(1);
    std::vector<IntervalSnapshot> snaps{snap(0, "1.2000", "1.2004", "1.2000")};

    const FixResult r = compute_trade_fix(snaps, cfg, w);
    CHECK(r.mid_4x == 4 * P("1.2002"));
    CHECK(r.mid() == doctest::Approx(1.2002));
    CHECK(r.n_trade_points == 1);
    CHECK(!r.used_quote_fallback);
    // S_M = 0.0004 exceeds the standard spread, so it is used instead.
    CHECK(r.spread_used == SpreadValue{P("0.0004"), 1});
    CHECK(r.fix_bid() == doctest::Approx(1.2000));
    CHECK(r.fix_ask() == doctest::Approx(1.2004));
}

TEST_CASE("two-interval trade fix: medians by hand") {
    PairConfig cfg;
    cfg.standard_spread = P("0.0001");
    cfg.min_trade_intervals = 1;
    const FixWindow w = window_for(2);
    // Bid trades at 1.2000 and 1.2010, each interval spread 0.0002:
    //   bid set {1.2000, 1.2010} -> median 1.2005
    //   offer set {1.2002, 1.2012} -> median 1.2007
    //   mid 1.2006
    std::vector<IntervalSnapshot> snaps{snap(0, "1.2000", "1.2002", "1.2000"),
                                        snap(1, "1.2010", "1.2012", "1.2010")};
    const FixResult r = compute_trade_fix(snaps, cfg, w);
    CHECK(r.mid_4x == 4 * P("1.2006"));
    CHECK(r.n_trade_points == 2);
    CHECK(r.market_spread == SpreadValue{P("0.0002"), 1});
}

TEST_CASE("trade fix falls back to quotes when trades are scarce") {
    PairConfig cfg;
    cfg.min_trade_intervals = 31;
    const FixWindow w = window_for(61);
    std::vector<IntervalSnapshot> snaps(61);
    for (int i = 0; i < 61; ++i) snaps[i] = snap(i, "1.3000", "1.3002", std::nullopt);
    snaps[7].last_trade = P("1.3000"); // one lonely trade
    snaps[7].last_trade_ts = 7'500;

    const FixResult r = compute_trade_fix(snaps, cfg, w);
    CHECK(r.used_quote_fallback);
    CHECK(r.n_trade_points == 0);
    CHECK(r.mid_4x == 4 * P("1.3001"));
    CHECK(r.spread_used == SpreadValue{P("0.0002"), 1});
}

TEST_CASE("no data at all raises NoDataError") {
    PairConfig cfg;
    const FixWindow w = window_for(61);
    std::vector<IntervalSnapshot> snaps(61);
    for (int i = 0; i < 61; ++i) snaps[i].interval_index = i;
    CHECK_THROWS_AS(compute_trade_fix(snaps, cfg, w), NoDataError);
    CHECK_THROWS_AS(compute_quote_fix(snaps), NoDataError);
}

TEST_CASE("quote fix of an arithmetic ladder") {
    std::vector<IntervalSnapshot> snaps;
    for (int i = 0; i < 9; ++i) {
        const Price bid = P("1.3000") + i * P("0.0001");
        IntervalSnapshot s;
        s.interval_index = i;
        s.last_bid = bid;
        s.last_ask = bid + P("0.0002");
        s.last_quote_ts = i;
        snaps.push_back(s);
    }
    const FixResult r = compute_quote_fix(snaps);
    CHECK(r.mid_4x == 4 * P("1.3005")); // medians 1.3004 / 1.3006
    CHECK(r.spread_used == SpreadValue{P("0.0002"), 1});
    CHECK(r.n_trade_points == 0);
}

TEST_CASE("degenerate quote fix") {
    std::vector<IntervalSnapshot> snaps{snap(0, "1", "1", std::nullopt)};
    const FixResult r = compute_quote_fix(snaps);
    CHECK(r.mid_4x == 4 * P("1"));
    CHECK(r.spread_used == SpreadValue{0, 1});
}

TEST_CASE("quote fix oracle equivalence on random windows") {
    std::mt19937 rng(1234);
    for (int c = 0; c < 1000; ++c) {
        auto snaps = random_snapshots(rng, 9, 0.7, 0.0);
        const auto expected = oracle::quote_fix(snaps);
        if (expected.no_data) {
            CHECK_THROWS_AS(compute_quote_fix(snaps), NoDataError);
            continue;
        }
        const FixResult r = compute_quote_fix(snaps);
        CHECK(oracle::matches(r, expected));
    }
}

TEST_CASE("trade fix oracle equivalence on random 61-interval windows") {
    std::mt19937 rng(99);
    PairConfig cfg;
    cfg.standard_spread = P("0.0003");
    std::uniform_int_distribution<int> threshold(0, 61);
    const FixWindow w = window_for(61);
    for (int c = 0; c < 1000; ++c) {
        cfg.min_trade_intervals = threshold(rng);
        auto snaps = random_snapshots(rng, 61);
        const auto expected = oracle::trade_fix(snaps, cfg, w.sample_count());
        if (expected.no_data) {
            CHECK_THROWS_AS(compute_trade_fix(snaps, cfg, w), NoDataError);
            continue;
        }
        const FixResult r = compute_trade_fix(snaps, cfg, w);
        CHECK(oracle::matches(r, expected));
    }
}

TEST_CASE("translation equivariance on the decimal grid") {
    std::mt19937 rng(5);
    PairConfig cfg;
    cfg.min_trade_intervals = 3;
    const FixWindow w = window_for(61);
    const Price c = P("0.0100");
    for (int trial = 0; trial < 200; ++trial) {
        auto snaps = random_snapshots(rng, 61);
        auto shifted = snaps;
        for (auto& s : shifted) {
            if (s.last_bid) {
                *s.last_bid += c;
                *s.last_ask += c;
            }
            if (s.last_trade) *s.last_trade += c;
        }
        FixResult base, moved;
        try {
            base = compute_trade_fix(snaps, cfg, w);
        } catch (const NoDataError&) {
            CHECK_THROWS_AS(compute_trade_fix(shifted, cfg, w), NoDataError);
            continue;
        }
        moved = compute_trade_fix(shifted, cfg, w);
        CHECK(moved.mid_4x == base.mid_4x + 4 * c);
        CHECK(moved.spread_used == base.spread_used);
        CHECK(moved.market_spread == base.market_spread);
        CHECK(moved.n_trade_points == base.n_trade_points);
    }
}

TEST_CASE("bid <= mid <= ask, spread floor on the trade path") {
    std::mt19937 rng(6);
    PairConfig cfg;
    cfg.standard_spread = P("0.0002");
    cfg.min_trade_intervals = 1;
    const FixWindow w = window_for(61);
    const SpreadValue standard{cfg.standard_spread, 1};
    for (int trial = 0; trial < 300; ++trial) {
        auto snaps = random_snapshots(rng, 61);
        try {
            const FixResult r = compute_trade_fix(snaps, cfg, w);
            CHECK(r.fix_bid() <= r.mid());
            CHECK(r.mid() <= r.fix_ask());
            if (!r.used_quote_fallback) CHECK(!(r.spread_used < standard));
        } catch (const NoDataError&) {
        }
    }
}

TEST_CASE("arrival order within the stream does not matter once time-ordered") {
    std::mt19937 rng(17);
    const FixWindow w = window_for(61);
    PairConfig cfg;
    cfg.min_trade_intervals = 1;

    std::vector<TickEvent> ticks;
    std::uniform_int_distribution<int> off(0, 60'999);
    std::uniform_int_distribution<int> lev(-10, 10);
    const TimestampMs start = w.center - w.half_width_ms;
    for (int i = 0; i < 400; ++i) {
        const TimestampMs ts = start + off(rng);
        const Price bid = P("1.2") + lev(rng) * P("0.0001");
        if (i % 3 == 0)
            ticks.push_back(Trade{ts, bid, "S"});
        else
            ticks.push_back(Quote{ts, bid, bid + P("0.0002"), "S"});
    }
    auto sorted = ticks;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TickEvent& a, const TickEvent& b) { return event_ts(a) < event_ts(b); });
    auto shuffled = ticks;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    // Re-establish time order; events at distinct timestamps may arrive in
    // any order without changing the fix.
    std::stable_sort(shuffled.begin(), shuffled.end(),
                     [](const TickEvent& a, const TickEvent& b) { return event_ts(a) < event_ts(b); });

    const auto snaps_a = sample_intervals(sorted, w);
    const auto snaps_b = sample_intervals(shuffled, w);
    const FixResult ra = compute_trade_fix(snaps_a, cfg, w);
    const FixResult rb = compute_trade_fix(snaps_b, cfg, w);
    CHECK(ra.mid_4x == rb.mid_4x);
    CHECK(ra.spread_used == rb.spread_used);
    CHECK(ra.n_trade_points == rb.n_trade_points);
}

TEST_CASE("quality filter keeps consistent ticks and drops deviants") {
    std::vector<TickEvent> ticks;
    // Establish a 1.3000 reference over the preceding 10 minutes.
    for (int i = 0; i < 40; ++i) ticks.push_back(mk_trade(i * 15'000 + 500, "1.3000"));
    const TimestampMs t = 40 * 15'000 + 100;
    ticks.push_back(mk_trade(t, "1.3000"));     // zero deviation: retained
    ticks.push_back(mk_trade(t + 1, "1.4000")); // 7.7% off: removed
    ticks.push_back(mk_quote(t + 2, "1.3001", "1.2999")); // crossed: removed
    ticks.push_back(mk_quote(t + 3, "1.2999", "1.3001")); // consistent quote: retained

    const auto kept = quality_filter(ticks, 0.01);
    REQUIRE(kept.size() == 42);
    CHECK(std::get<Trade>(kept[40]).price == P("1.3000"));
    CHECK(std::get<Quote>(kept[41]).bid == P("1.2999"));
}

TEST_CASE("ticks before any reference exist are kept") {
    std::vector<TickEvent> ticks{mk_trade(100, "1.0"), mk_trade(200, "9.9")};
    // Both in the first slot: no reference yet for either.
    CHECK(quality_filter(ticks, 0.01).size() == 2);
}

TEST_CASE("quality filter equals the pointwise oracle on random streams") {
    std::mt19937 rng(321);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> lev(-20, 20);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<TickEvent> ticks;
        TimestampMs ts = 0;
        for (int i = 0; i < 500; ++i) {
            ts += static_cast<TimestampMs>(u(rng) * 8'000);
            Price mid = P("1.3") + lev(rng) * P("0.0001");
            if (u(rng) < 0.05) mid += P("0.1"); // occasional wild tick
            if (u(rng) < 0.5) {
                ticks.push_back(Trade{ts, mid, "S"});
            } else {
                Price bid = mid - P("0.0001"), ask = mid + P("0.0001");
                if (u(rng) < 0.03) std::swap(bid, ask); // occasional crossed quote
                ticks.push_back(Quote{ts, bid, ask, "S"});
            }
        }
        const auto got = quality_filter(ticks, 0.01);
        const auto expected = oracle::quality_filter(ticks, 0.01);
        CHECK(streams_equal(got, expected));
    }
}

TEST_CASE("select_source prefers the quote-richest source on fallback") {
    PairConfig cfg; // default threshold 31 of 61: no trades anywhere -> fallback
    const FixWindow w = window_for(61);

    std::vector<IntervalSnapshot> a(61), b(61);
    for (int i = 0; i < 61; ++i) {
        a[i].interval_index = i;
        b[i].interval_index = i;
    }
    for (int i = 0; i < 9; ++i) {
        a[i].last_bid = P("1.1000");
        a[i].last_ask = P("1.1002");
        a[i].last_quote_ts = w.interval_end(i) - 10;
    }
    for (int i = 0; i < 3; ++i) {
        b[i].last_bid = P("1.2000");
        b[i].last_ask = P("1.2002");
        b[i].last_quote_ts = w.interval_end(i) - 5;
    }
    const FixResult r = select_source({{"A", a}, {"B", b}}, cfg, w);
    CHECK(r.used_quote_fallback);
    CHECK(r.source_used == "A");
    CHECK(r.mid_4x == 4 * P("1.1001"));
}

TEST_CASE("select_source averages tied sources") {
    PairConfig cfg;
    const FixWindow w = window_for(61);
    std::vector<IntervalSnapshot> a(61), b(61);
    for (int i = 0; i < 61; ++i) {
        a[i].interval_index = i;
        b[i].interval_index = i;
    }
    for (int i = 0; i < 5; ++i) {
        a[i].last_bid = P("1.0999");
        a[i].last_ask = P("1.1001"); // mid 1.10
        a[i].last_quote_ts = w.interval_end(i) - 10;
        b[i].last_bid = P("1.1199");
        b[i].last_ask = P("1.1201"); // mid 1.12
        b[i].last_quote_ts = w.interval_end(i) - 10;
    }
    const FixResult r = select_source({{"A", a}, {"B", b}}, cfg, w);
    CHECK(r.source_used == "averaged");
    CHECK(r.mid() == doctest::Approx(1.11));
}

TEST_CASE("single quote datapoint resolves by most recent update") {
    PairConfig cfg;
    const FixWindow w = window_for(61);
    std::vector<IntervalSnapshot> a(61), b(61);
    for (int i = 0; i < 61; ++i) {
        a[i].interval_index = i;
        b[i].interval_index = i;
    }
    a[59].last_bid = P("1.1000");
    a[59].last_ask = P("1.1002");
    a[59].last_quote_ts = w.center + 29'800; // ...:29.8
    b[59].last_bid = P("1.2000");
    b[59].last_ask = P("1.2002");
    b[59].last_quote_ts = w.center + 29'900; // ...:29.9, newer
    const FixResult r = select_source({{"A", a}, {"B", b}}, cfg, w);
    CHECK(r.source_used == "B");
    CHECK(r.mid_4x == 4 * P("1.2001"));
}

TEST_CASE("pooled trade path equals sampling the merged stream") {
    PairConfig cfg;
    cfg.min_trade_intervals = 1;
    const FixWindow w = window_for(61);
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> off(0, 60'999);
    std::uniform_int_distribution<int> lev(-10, 10);

    std::vector<TickEvent> a_ticks, b_ticks;
    const TimestampMs start = w.center - w.half_width_ms;
    for (int i = 0; i < 300; ++i) {
        const TimestampMs ts = start + off(rng);
        const Price bid = P("1.2") + lev(rng) * P("0.0001");
        auto& dest = i % 2 == 0 ? a_ticks : b_ticks;
        const std::string src = i % 2 == 0 ? "A" : "B";
        if (i % 3 == 0)
            dest.push_back(Trade{ts, bid, src});
        else
            dest.push_back(Quote{ts, bid, bid + P("0.0002"), src});
    }
    auto by_ts = [](const TickEvent& x, const TickEvent& y) { return event_ts(x) < event_ts(y); };
    std::stable_sort(a_ticks.begin(), a_ticks.end(), by_ts);
    std::stable_sort(b_ticks.begin(), b_ticks.end(), by_ts);

    const FixResult pooled = select_source(
        {{"A", sample_intervals(a_ticks, w)}, {"B", sample_intervals(b_ticks, w)}}, cfg, w);

    std::vector<TickEvent> merged = a_ticks;
    merged.insert(merged.end(), b_ticks.begin(), b_ticks.end());
    std::stable_sort(merged.begin(), merged.end(), by_ts);
    const FixResult direct = compute_trade_fix(sample_intervals(merged, w), cfg, w);

    CHECK(pooled.source_used == "pooled");
    CHECK(pooled.mid_4x == direct.mid_4x);
    CHECK(pooled.spread_used == direct.spread_used);
    CHECK(pooled.n_trade_points == direct.n_trade_points);
}
