#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "wmr/ingestion.hpp"

namespace wmr {

enum class Stream { high, low, close };

const char* stream_name(Stream s);

/// Thrown when a return cannot be computed (zero denominator); identifies the
/// day and minute.
struct ComputeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Day's prices for one stream, as rates.
std::array<double, kMinutesPerDay> stream_prices(const DayBars& day, Stream stream);

/// Minute-by-minute arithmetic returns laid out as a days x 1440 matrix.
/// Entry (d, 0) chains through the previous retained day's final close;
/// absent entries are NaN.
struct ReturnMatrix {
    std::string pair;
    Stream stream = Stream::close;
    int day_count = 0;
    std::vector<double> values; // day * 1440 + minute

    double at(int day, int minute) const {
        return values[static_cast<std::size_t>(day) * kMinutesPerDay +
                      static_cast<std::size_t>(minute)];
    }
};

ReturnMatrix minute_returns(const Dataset& dataset, Stream stream);

/// Annualisation factor sqrt(252 * 24 * 60): per-minute return stddev to
/// annualised volatility.
extern const double kAnnualizationFactor;

/// Per-minute annualised volatility; sigma is NaN where fewer than two
/// returns are available.
struct VolatilityProfile {
    std::array<double, kMinutesPerDay> sigma{};
    std::array<int, kMinutesPerDay> sample_counts{};
};

VolatilityProfile vol_profile(const ReturnMatrix& matrix);

struct SpikeFlag {
    int minute = 0;
    double z = 0.0;
};

/// Flag minutes whose volatility stands out of the local background: sigma(t)
/// must exceed the median over [t-k, t+k]\{t} by `z_threshold` scaled median
/// absolute deviations. Flags are returned sorted by descending z.
std::vector<SpikeFlag> detect_spikes(const VolatilityProfile& profile, int window_k = 30,
                                     double z_threshold = 4.0);

void write_profile_csv(const std::filesystem::path& path, const VolatilityProfile& profile);
void write_spikes_csv(const std::filesystem::path& path, const std::vector<SpikeFlag>& flags);

} // namespace wmr
