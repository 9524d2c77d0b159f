#include "wmr/types.hpp"

namespace wmr {

FixWindow FixWindow::for_pair(const PairConfig& cfg, TimestampMs center) {
    FixWindow w;
    w.center = center;
    if (cfg.currency_class == CurrencyClass::trade) {
        w.half_width_ms = cfg.methodology == Methodology::pre2015 ? 30'000 : 150'000;
        w.sample_period_ms = 1'000;
    } else {
        w.half_width_ms = cfg.methodology == Methodology::pre2015 ? 60'000 : 150'000;
        w.sample_period_ms = 15'000;
    }
    return w;
}

int effective_min_trade_intervals(const PairConfig& cfg, const FixWindow& window) {
    if (cfg.min_trade_intervals >= 0) return cfg.min_trade_intervals;
    return (window.sample_count() + 1) / 2;
}

} // namespace wmr
