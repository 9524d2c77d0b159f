#include "wmr/analysis_extrema.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace wmr {

const char* side_name(IntervalSide s) { return s == IntervalSide::int1 ? "int1" : "int2"; }
const char* kind_name(ExtremumKind k) { return k == ExtremumKind::max ? "max" : "min"; }

namespace {

struct IntervalBounds {
    int anchor; // minute whose price normalises the returns
    int first;  // first minute in the series
    int last;   // last minute in the series
};

IntervalBounds bounds_for(int t_f_minute, int dt_minutes, IntervalSide side) {
    IntervalBounds b{};
    if (side == IntervalSide::int1) {
        b.anchor = t_f_minute - dt_minutes;
        b.first = b.anchor + 1;
        b.last = t_f_minute;
    } else {
        b.anchor = t_f_minute;
        b.first = t_f_minute + 1;
        b.last = t_f_minute + dt_minutes;
    }
    if (dt_minutes < 1 || b.anchor < 0 || b.last >= kMinutesPerDay)
        throw DomainError("interval [" + std::to_string(b.anchor) + ", " +
                          std::to_string(b.last) + "] crosses the day boundary");
    return b;
}

} // namespace

std::vector<double> period_returns(const std::array<double, kMinutesPerDay>& prices,
                                   int t_f_minute, int dt_minutes, IntervalSide side) {
    const IntervalBounds b = bounds_for(t_f_minute, dt_minutes, side);
    const double anchor = prices[static_cast<std::size_t>(b.anchor)];
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(dt_minutes));
    for (int t = b.first; t <= b.last; ++t)
        out.push_back((prices[static_cast<std::size_t>(t)] - anchor) / anchor);
    return out;
}

IntervalExtremum interval_extremum(const std::array<double, kMinutesPerDay>& prices,
                                   int t_f_minute, int dt_minutes, IntervalSide side,
                                   ExtremumKind kind) {
    const IntervalBounds b = bounds_for(t_f_minute, dt_minutes, side);
    const double anchor = prices[static_cast<std::size_t>(b.anchor)];

    IntervalExtremum ext;
    ext.value = 0.0; // anchor's own return
    ext.minute = b.anchor;
    for (int t = b.first; t <= b.last; ++t) {
        const double r = (prices[static_cast<std::size_t>(t)] - anchor) / anchor;
        const bool better = kind == ExtremumKind::max ? r > ext.value : r < ext.value;
        if (better) {
            ext.value = r;
            ext.minute = t;
            ext.unique = true;
        } else if (r == ext.value) {
            ext.unique = false;
        }
    }
    return ext;
}

int daily_global_extremum(const std::array<double, kMinutesPerDay>& prices, int dt_minutes,
                          IntervalSide side, ExtremumKind kind, const SurfaceGrid& grid) {
    int best_hour = grid.first_hour;
    double best = -1.0;
    for (int hour = grid.first_hour; hour <= grid.last_hour; ++hour) {
        const IntervalExtremum ext =
            interval_extremum(prices, hour * 60, dt_minutes, side, kind);
        const double score = std::abs(ext.value);
        if (score > best) { // strict: ties keep the earliest hour
            best = score;
            best_hour = hour;
        }
    }
    return best_hour;
}

ExtremaSurface build_surface(const Dataset& dataset, IntervalSide side, ExtremumKind kind,
                             Stream stream, const SurfaceGrid& grid) {
    ExtremaSurface surface;
    surface.side = side;
    surface.kind = kind;
    surface.stream = stream;
    surface.grid = grid;
    surface.day_count = static_cast<int>(dataset.days.size());

    // Validate the grid up front; interval_extremum must not throw from
    // inside the parallel region.
    if (grid.first_hour > grid.last_hour || grid.dt_min < 1 || grid.dt_min > grid.dt_max)
        throw DomainError("malformed surface grid");
    bounds_for(grid.first_hour * 60, grid.dt_max, side);
    bounds_for(grid.last_hour * 60, grid.dt_max, side);

    const int hours = grid.hour_count();
    const int dts = grid.dt_count();

    // Per-day winners first, histogram second, so the counts do not depend
    // on the number of threads.
    std::vector<int> winners(static_cast<std::size_t>(surface.day_count) * dts);
#pragma omp parallel for schedule(static)
    for (int d = 0; d < surface.day_count; ++d) {
        const auto prices = stream_prices(dataset.days[static_cast<std::size_t>(d)], stream);
        for (int dt = grid.dt_min; dt <= grid.dt_max; ++dt)
            winners[static_cast<std::size_t>(d) * dts + (dt - grid.dt_min)] =
                daily_global_extremum(prices, dt, side, kind, grid);
    }

    std::vector<std::int64_t> counts(static_cast<std::size_t>(dts) * hours, 0);
    for (int d = 0; d < surface.day_count; ++d)
        for (int i = 0; i < dts; ++i)
            ++counts[static_cast<std::size_t>(i) * hours +
                     (winners[static_cast<std::size_t>(d) * dts + i] - grid.first_hour)];

    surface.probabilities.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        surface.probabilities[i] =
            surface.day_count > 0 ? static_cast<double>(counts[i]) / surface.day_count : 0.0;
    return surface;
}

double delta_r(const DayBars& day, int t_f_minute, int dt_minutes, IntervalSide side) {
    const auto highs = stream_prices(day, Stream::high);
    const auto lows = stream_prices(day, Stream::low);
    const double r_max =
        interval_extremum(highs, t_f_minute, dt_minutes, side, ExtremumKind::max).value;
    const double r_min =
        interval_extremum(lows, t_f_minute, dt_minutes, side, ExtremumKind::min).value;
    return r_max - r_min;
}

void write_surfaces_csv(const std::filesystem::path& path,
                        std::span<const ExtremaSurface> surfaces) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "hour,delta_t,side,kind,stream,probability\n";
    char buf[32];
    for (const auto& s : surfaces) {
        for (int dt = s.grid.dt_min; dt <= s.grid.dt_max; ++dt) {
            for (int hour = s.grid.first_hour; hour <= s.grid.last_hour; ++hour) {
                std::snprintf(buf, sizeof buf, "%.10g", s.at(hour, dt));
                out << hour << ',' << dt << ',' << side_name(s.side) << ',' << kind_name(s.kind)
                    << ',' << stream_name(s.stream) << ',' << buf << '\n';
            }
        }
    }
}

} // namespace wmr
