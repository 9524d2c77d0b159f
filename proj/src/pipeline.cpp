#include "wmr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace wmr {

namespace {

// A simulated day is complete unless some minute saw no trade at all, which
// at the configured arrival rates essentially never happens.
std::optional<DayBars> simulate_day_bars(const SimScenario& scenario, int day_index) {
    const Date date = scenario_date(scenario, day_index);
    const auto ticks = gen_day(scenario, day_index);
    auto bars = ticks_to_bars(ticks, date);
    if (static_cast<int>(bars.size()) != kMinutesPerDay) return std::nullopt;
    return DayBars{date, std::move(bars)};
}

} // namespace

Dataset simulate_dataset(const SimScenario& scenario) {
    std::vector<std::optional<DayBars>> days(static_cast<std::size_t>(scenario.day_count));
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < scenario.day_count; ++d)
        days[static_cast<std::size_t>(d)] = simulate_day_bars(scenario, d);

    Dataset ds;
    ds.pair = scenario.source;
    for (auto& day : days) {
        if (day)
            ds.days.push_back(std::move(*day));
        else
            ++ds.excluded_days;
    }
    return ds;
}

FixResult fix_for_ticks(std::span<const TickEvent> ticks, const PairConfig& cfg,
                        TimestampMs window_center) {
    const FixWindow window = FixWindow::for_pair(cfg, window_center);
    const auto filtered = quality_filter(ticks, cfg.quality_tolerance);

    std::map<std::string, std::vector<TickEvent>> by_source;
    for (const auto& e : filtered) by_source[event_source(e)].push_back(e);

    SourceSnapshots per_source;
    // Keep the configured source order; unknown sources follow alphabetically.
    for (const auto& name : cfg.sources) {
        auto it = by_source.find(name);
        if (it == by_source.end()) continue;
        per_source.emplace_back(name, sample_intervals(it->second, window));
        by_source.erase(it);
    }
    for (const auto& [name, events] : by_source)
        per_source.emplace_back(name, sample_intervals(events, window));

    if (per_source.empty()) throw NoDataError("no ticks available for fix window");
    return select_source(per_source, cfg, window);
}

std::vector<DayFix> fix_simulated_days(const SimScenario& scenario, const PairConfig& cfg) {
    std::vector<DayFix> fixes(static_cast<std::size_t>(scenario.day_count));
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < scenario.day_count; ++d) {
        DayFix& out = fixes[static_cast<std::size_t>(d)];
        out.date = scenario_date(scenario, d);
        const auto ticks = gen_day(scenario, d);
        try {
            out.fix = fix_for_ticks(ticks, cfg, scenario_fix_center(scenario, d));
            out.ok = true;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    }
    return fixes;
}

namespace serial {

Dataset simulate_dataset(const SimScenario& scenario) {
    Dataset ds;
    ds.pair = scenario.source;
    for (int d = 0; d < scenario.day_count; ++d) {
        if (auto day = simulate_day_bars(scenario, d))
            ds.days.push_back(std::move(*day));
        else
            ++ds.excluded_days;
    }
    return ds;
}

ReturnMatrix minute_returns(const Dataset& dataset, Stream stream) {
    ReturnMatrix rm;
    rm.pair = dataset.pair;
    rm.stream = stream;
    rm.day_count = static_cast<int>(dataset.days.size());
    rm.values.assign(static_cast<std::size_t>(rm.day_count) * kMinutesPerDay,
                     std::numeric_limits<double>::quiet_NaN());
    for (int d = 0; d < rm.day_count; ++d) {
        const auto prices = stream_prices(dataset.days[static_cast<std::size_t>(d)], stream);
        for (int t = 0; t < kMinutesPerDay; ++t) {
            double prev;
            if (t > 0)
                prev = prices[static_cast<std::size_t>(t - 1)];
            else if (d > 0)
                prev = to_rate(dataset.days[static_cast<std::size_t>(d - 1)].bars.back().close);
            else
                continue;
            if (prev == 0.0)
                throw ComputeError("zero price at day " + std::to_string(d) + " minute " +
                                   std::to_string(t - 1));
            rm.values[static_cast<std::size_t>(d) * kMinutesPerDay +
                      static_cast<std::size_t>(t)] =
                (prices[static_cast<std::size_t>(t)] - prev) / prev;
        }
    }
    return rm;
}

VolatilityProfile vol_profile(const ReturnMatrix& matrix) {
    VolatilityProfile profile;
    for (int t = 0; t < kMinutesPerDay; ++t) {
        int n = 0;
        double sum = 0.0;
        for (int d = 0; d < matrix.day_count; ++d) {
            const double r = matrix.at(d, t);
            if (!std::isnan(r)) {
                sum += r;
                ++n;
            }
        }
        profile.sample_counts[static_cast<std::size_t>(t)] = n;
        if (n < 2) {
            profile.sigma[static_cast<std::size_t>(t)] =
                std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (int d = 0; d < matrix.day_count; ++d) {
            const double r = matrix.at(d, t);
            if (!std::isnan(r)) ss += (r - mean) * (r - mean);
        }
        profile.sigma[static_cast<std::size_t>(t)] =
            kAnnualizationFactor * std::sqrt(ss / (n - 1));
    }
    return profile;
}

ExtremaSurface build_surface(const Dataset& dataset, IntervalSide side, ExtremumKind kind,
                             Stream stream, const SurfaceGrid& grid) {
    ExtremaSurface surface;
    surface.side = side;
    surface.kind = kind;
    surface.stream = stream;
    surface.grid = grid;
    surface.day_count = static_cast<int>(dataset.days.size());
    const int hours = grid.hour_count();
    std::vector<std::int64_t> counts(static_cast<std::size_t>(grid.dt_count()) * hours, 0);
    for (const auto& day : dataset.days) {
        const auto prices = stream_prices(day, stream);
        for (int dt = grid.dt_min; dt <= grid.dt_max; ++dt) {
            const int hour = daily_global_extremum(prices, dt, side, kind, grid);
            ++counts[static_cast<std::size_t>(dt - grid.dt_min) * hours +
                     (hour - grid.first_hour)];
        }
    }
    surface.probabilities.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        surface.probabilities[i] =
            surface.day_count > 0 ? static_cast<double>(counts[i]) / surface.day_count : 0.0;
    return surface;
}

CenteredHistogram aggregate(const Dataset& dataset, int half_width) {
    CenteredHistogram hist;
    hist.day_count = static_cast<int>(dataset.days.size());
    hist.half_width = half_width;
    hist.size_max_bpt.fill(std::numeric_limits<double>::quiet_NaN());
    hist.size_max_stderr_bpt.fill(std::numeric_limits<double>::quiet_NaN());
    hist.size_min_bpt.fill(std::numeric_limits<double>::quiet_NaN());
    hist.size_min_stderr_bpt.fill(std::numeric_limits<double>::quiet_NaN());
    if (hist.day_count == 0) return hist;

    constexpr std::array<Stream, 3> kStreams{Stream::high, Stream::low, Stream::close};
    struct Acc {
        int n = 0;
        double sum = 0.0, sum_sq = 0.0;
    };
    std::array<std::array<Acc, kMinutesPerDay>, 3> acc_max{};
    std::array<std::array<Acc, kMinutesPerDay>, 3> acc_min{};

    for (const auto& day : dataset.days) {
        for (std::size_t s = 0; s < kStreams.size(); ++s) {
            const auto events = centered_extrema(stream_prices(day, kStreams[s]), half_width);
            for (const auto& e : events) {
                const auto m = static_cast<std::size_t>(e.minute);
                const double bpt = e.size_abs * 1e4;
                auto& a = e.kind == ExtremumKind::max ? acc_max[s][m] : acc_min[s][m];
                ++a.n;
                a.sum += bpt;
                a.sum_sq += bpt * bpt;
                if (kStreams[s] == Stream::close) {
                    if (e.kind == ExtremumKind::max)
                        ++hist.count_max[m];
                    else
                        ++hist.count_min[m];
                }
            }
        }
    }

    for (int m = 0; m < kMinutesPerDay; ++m) {
        const auto mu = static_cast<std::size_t>(m);
        hist.prob_max[mu] = static_cast<double>(hist.count_max[mu]) / hist.day_count;
        hist.prob_min[mu] = static_cast<double>(hist.count_min[mu]) / hist.day_count;
        auto combine = [&](const std::array<std::array<Acc, kMinutesPerDay>, 3>& acc,
                           double& mean_out, double& err_out) {
            int present = 0;
            double mean_sum = 0.0, err_sq = 0.0;
            for (std::size_t s = 0; s < 3; ++s) {
                const Acc& a = acc[s][mu];
                if (a.n == 0) continue;
                ++present;
                mean_sum += a.sum / a.n;
                if (a.n >= 2) {
                    const double var = std::max(0.0, (a.sum_sq - a.sum * a.sum / a.n) / (a.n - 1));
                    err_sq += var / a.n;
                }
            }
            if (present > 0) {
                mean_out = mean_sum / present;
                err_out = std::sqrt(err_sq) / present;
            }
        };
        combine(acc_max, hist.size_max_bpt[mu], hist.size_max_stderr_bpt[mu]);
        combine(acc_min, hist.size_min_bpt[mu], hist.size_min_stderr_bpt[mu]);
    }
    return hist;
}

} // namespace serial

} // namespace wmr
