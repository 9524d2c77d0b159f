#pragma once

#include "wmr/analysis_centered.hpp"
#include "wmr/analysis_extrema.hpp"
#include "wmr/analysis_vol.hpp"
#include "wmr/fix_engine.hpp"
#include "wmr/ingestion.hpp"
#include "wmr/simulator.hpp"

namespace wmr {

/// Simulate `scenario.day_count` days of minute bars (parallel across days).
/// The rare day with a trade-less minute is excluded, mirroring ingestion.
Dataset simulate_dataset(const SimScenario& scenario);

/// Full single-stream fix: quality filter, split by source, sample each
/// source's intervals, then select across sources.
FixResult fix_for_ticks(std::span<const TickEvent> ticks, const PairConfig& cfg,
                        TimestampMs window_center);

struct DayFix {
    Date date;
    bool ok = false;
    FixResult fix;
    std::string error;
};

/// Simulate and fix each day of a scenario (parallel across days, streaming;
/// tick streams are not retained).
std::vector<DayFix> fix_simulated_days(const SimScenario& scenario, const PairConfig& cfg);

namespace serial {

/// Serial reference implementations of the parallel kernels. Kept simple and
/// single-threaded; the test suite checks the OpenMP kernels against them
/// and the benchmark tool compares their runtimes.
Dataset simulate_dataset(const SimScenario& scenario);
ReturnMatrix minute_returns(const Dataset& dataset, Stream stream);
VolatilityProfile vol_profile(const ReturnMatrix& matrix);
ExtremaSurface build_surface(const Dataset& dataset, IntervalSide side, ExtremumKind kind,
                             Stream stream, const SurfaceGrid& grid = {});
CenteredHistogram aggregate(const Dataset& dataset, int half_width = 20);

} // namespace serial

} // namespace wmr
