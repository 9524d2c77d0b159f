#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "wmr/analysis_extrema.hpp"

namespace wmr {

/// A window extremum of period returns landing exactly at the window centre.
/// `size_abs` is |R(T_F)| in raw return units.
struct CenteredEvent {
    int minute = 0;
    ExtremumKind kind = ExtremumKind::max;
    double size_abs = 0.0;
};

/// Scan a +-half_width window over every minute of the day. Period returns
/// anchor at the window start; an event is recorded when the window's
/// maximum (or minimum) return sits uniquely at the centre. Windows cut off
/// by the day boundary are skipped.
std::vector<CenteredEvent> centered_extrema(const std::array<double, kMinutesPerDay>& prices,
                                            int half_width = 20);

/// Aggregated centred-extremum statistics. Counts and probabilities come
/// from the closing-price stream; movement sizes average the three price
/// streams with Gaussian error propagation. Size entries are NaN where no
/// event occurred.
struct CenteredHistogram {
    int day_count = 0;
    int half_width = 20;
    std::array<int, kMinutesPerDay> count_max{};
    std::array<int, kMinutesPerDay> count_min{};
    std::array<double, kMinutesPerDay> prob_max{};
    std::array<double, kMinutesPerDay> prob_min{};
    std::array<double, kMinutesPerDay> size_max_bpt{};
    std::array<double, kMinutesPerDay> size_max_stderr_bpt{};
    std::array<double, kMinutesPerDay> size_min_bpt{};
    std::array<double, kMinutesPerDay> size_min_stderr_bpt{};
};

CenteredHistogram aggregate(const Dataset& dataset, int half_width = 20);

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CorrelationResult {
    double correlation = 0.0;
    double p_value = 1.0;
    int n = 0;
};

/// Pearson correlation between event signs (+1 maximum, -1 minimum) and the
/// sign of an external daily return on the same dates, with a two-sided
/// permutation p-value. Throws InsufficientDataError below 10 overlaps.
CorrelationResult directional_correlation(std::span<const std::pair<Date, int>> events,
                                          const std::map<Date, double>& external,
                                          int permutations = 10'000,
                                          std::uint64_t seed = 0x5EEDu);

void write_centered_csv(const std::filesystem::path& path, const CenteredHistogram& hist);

} // namespace wmr
