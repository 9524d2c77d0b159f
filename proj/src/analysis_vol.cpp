#include "wmr/analysis_vol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace wmr {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median_of(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}
} // namespace

const double kAnnualizationFactor = std::sqrt(252.0 * 24.0 * 60.0);

const char* stream_name(Stream s) {
    switch (s) {
        case Stream::high: return "high";
        case Stream::low: return "low";
        case Stream::close: return "close";
    }
    return "?";
}

std::array<double, kMinutesPerDay> stream_prices(const DayBars& day, Stream stream) {
    std::array<double, kMinutesPerDay> out{};
    for (int m = 0; m < kMinutesPerDay; ++m) {
        const MinuteBar& bar = day.bars[static_cast<std::size_t>(m)];
        const Price p = stream == Stream::high ? bar.high
                        : stream == Stream::low ? bar.low
                                                : bar.close;
        out[static_cast<std::size_t>(m)] = to_rate(p);
    }
    return out;
}

ReturnMatrix minute_returns(const Dataset& dataset, Stream stream) {
    ReturnMatrix rm;
    rm.pair = dataset.pair;
    rm.stream = stream;
    rm.day_count = static_cast<int>(dataset.days.size());
    rm.values.assign(static_cast<std::size_t>(rm.day_count) * kMinutesPerDay, kNaN);

    // Exceptions cannot leave a parallel region; record the first offender
    // and rethrow afterwards.
    std::string error;
#pragma omp parallel for schedule(static)
    for (int d = 0; d < rm.day_count; ++d) {
        const DayBars& day = dataset.days[static_cast<std::size_t>(d)];
        const auto prices = stream_prices(day, stream);
        double* row = rm.values.data() + static_cast<std::size_t>(d) * kMinutesPerDay;
        for (int t = 0; t < kMinutesPerDay; ++t) {
            double prev;
            if (t > 0) {
                prev = prices[static_cast<std::size_t>(t - 1)];
            } else if (d > 0) {
                prev = to_rate(dataset.days[static_cast<std::size_t>(d - 1)].bars.back().close);
            } else {
                continue; // first minute of the first day has no predecessor
            }
            if (prev == 0.0) {
#pragma omp critical
                if (error.empty())
                    error = "zero price at " + format_date(day.date) + " minute " +
                            std::to_string(t - 1);
                break;
            }
            row[t] = (prices[static_cast<std::size_t>(t)] - prev) / prev;
        }
    }
    if (!error.empty()) throw ComputeError(error);
    return rm;
}

VolatilityProfile vol_profile(const ReturnMatrix& matrix) {
    VolatilityProfile profile;
#pragma omp parallel for schedule(static)
    for (int t = 0; t < kMinutesPerDay; ++t) {
        // Two passes per column, days in order, so the result does not depend
        // on the thread count.
        int n = 0;
        double sum = 0.0;
        for (int d = 0; d < matrix.day_count; ++d) {
            double r = matrix.at(d, t);
            if (!std::isnan(r)) {
                sum += r;
                ++n;
            }
        }
        profile.sample_counts[static_cast<std::size_t>(t)] = n;
        if (n < 2) {
            profile.sigma[static_cast<std::size_t>(t)] = kNaN;
            continue;
        }
        const double mean = sum / n;
        double ss = 0.0;
        for (int d = 0; d < matrix.day_count; ++d) {
            double r = matrix.at(d, t);
            if (!std::isnan(r)) {
                const double dev = r - mean;
                ss += dev * dev;
            }
        }
        profile.sigma[static_cast<std::size_t>(t)] =
            kAnnualizationFactor * std::sqrt(ss / (n - 1));
    }
    return profile;
}

std::vector<SpikeFlag> detect_spikes(const VolatilityProfile& profile, int window_k,
                                     double z_threshold) {
    std::vector<SpikeFlag> flags;
    std::vector<double> window, deviations;
    for (int t = 0; t < kMinutesPerDay; ++t) {
        const double s = profile.sigma[static_cast<std::size_t>(t)];
        if (std::isnan(s)) continue;
        window.clear();
        const int lo = std::max(0, t - window_k);
        const int hi = std::min(kMinutesPerDay - 1, t + window_k);
        for (int u = lo; u <= hi; ++u) {
            if (u == t) continue;
            const double v = profile.sigma[static_cast<std::size_t>(u)];
            if (!std::isnan(v)) window.push_back(v);
        }
        if (static_cast<int>(window.size()) < window_k) continue;
        const double med = median_of(window);
        deviations.clear();
        for (double v : window) deviations.push_back(std::abs(v - med));
        const double mad = 1.4826 * median_of(deviations);
        double z;
        if (mad > 0.0) {
            z = (s - med) / mad;
        } else {
            z = s > med ? std::numeric_limits<double>::infinity()
                        : (s < med ? -std::numeric_limits<double>::infinity() : 0.0);
        }
        if (z > z_threshold) flags.push_back({t, z});
    }
    std::stable_sort(flags.begin(), flags.end(),
                     [](const SpikeFlag& a, const SpikeFlag& b) { return a.z > b.z; });
    return flags;
}

namespace {
std::string fmt_double(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}
} // namespace

void write_profile_csv(const std::filesystem::path& path, const VolatilityProfile& profile) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "minute,sigma,count\n";
    for (int t = 0; t < kMinutesPerDay; ++t)
        out << t << ',' << fmt_double(profile.sigma[static_cast<std::size_t>(t)]) << ','
            << profile.sample_counts[static_cast<std::size_t>(t)] << '\n';
}

void write_spikes_csv(const std::filesystem::path& path, const std::vector<SpikeFlag>& flags) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "minute,z\n";
    for (const auto& f : flags) out << f.minute << ',' << fmt_double(f.z) << '\n';
}

} // namespace wmr
