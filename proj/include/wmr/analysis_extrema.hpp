#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "wmr/analysis_vol.hpp"

namespace wmr {

enum class IntervalSide { int1, int2 }; // before / after the fixing time
enum class ExtremumKind { max, min };

const char* side_name(IntervalSide s);
const char* kind_name(ExtremumKind k);

/// Interval outside the day grid.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Period returns anchored at the interval start: int1 anchors at
/// S(T_F - dt) and covers (T_F - dt, T_F]; int2 anchors at S(T_F) and covers
/// (T_F, T_F + dt]. The anchor's own (identically zero) return is not part
/// of the series; extremum searches reinstate it, matching the closed
/// interval the definitions are stated over.
std::vector<double> period_returns(const std::array<double, kMinutesPerDay>& prices,
                                   int t_f_minute, int dt_minutes, IntervalSide side);

struct IntervalExtremum {
    double value = 0.0;  // signed extremum of the period returns (anchor included)
    int minute = 0;      // where it occurs; the anchor minute when the zero wins
    bool unique = true;  // no other minute attains the same value
};

IntervalExtremum interval_extremum(const std::array<double, kMinutesPerDay>& prices,
                                   int t_f_minute, int dt_minutes, IntervalSide side,
                                   ExtremumKind kind);

struct SurfaceGrid {
    int first_hour = 2;
    int last_hour = 23;
    int dt_min = 1;
    int dt_max = 59;

    int hour_count() const { return last_hour - first_hour + 1; }
    int dt_count() const { return dt_max - dt_min + 1; }
};

/// Hour (on the grid) holding the day's most extreme period return for the
/// given interval size; ties resolve to the earliest hour.
int daily_global_extremum(const std::array<double, kMinutesPerDay>& prices, int dt_minutes,
                          IntervalSide side, ExtremumKind kind, const SurfaceGrid& grid);

/// Occurrence probability of the daily global extremum per (T_F, dt) cell,
/// normalised by the dataset's day count.
struct ExtremaSurface {
    IntervalSide side = IntervalSide::int1;
    ExtremumKind kind = ExtremumKind::max;
    Stream stream = Stream::close;
    SurfaceGrid grid;
    int day_count = 0;
    std::vector<double> probabilities; // (dt - dt_min) * hour_count + (hour - first_hour)

    double at(int hour, int dt) const {
        return probabilities[static_cast<std::size_t>(dt - grid.dt_min) * grid.hour_count() +
                             static_cast<std::size_t>(hour - grid.first_hour)];
    }
};

ExtremaSurface build_surface(const Dataset& dataset, IntervalSide side, ExtremumKind kind,
                             Stream stream, const SurfaceGrid& grid = {});

/// Widest movement across the anchored interval: max period return of the
/// high stream minus min period return of the low stream.
double delta_r(const DayBars& day, int t_f_minute, int dt_minutes, IntervalSide side);

void write_surfaces_csv(const std::filesystem::path& path,
                        std::span<const ExtremaSurface> surfaces);

} // namespace wmr
