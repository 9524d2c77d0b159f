#include "wmr/analysis_centered.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "wmr/simulator.hpp" // SimRng (permutation shuffles)

namespace wmr {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBptPerReturn = 1e4;
} // namespace

std::vector<CenteredEvent> centered_extrema(const std::array<double, kMinutesPerDay>& prices,
                                            int half_width) {
    std::vector<CenteredEvent> events;
    for (int tf = half_width; tf + half_width < kMinutesPerDay; ++tf) {
        // Period returns are a monotone transform of price, so the window's
        // return extremum (anchor's zero included) sits wherever the raw
        // price extremum sits.
        const double center = prices[static_cast<std::size_t>(tf)];
        bool is_max = true, is_min = true;
        for (int t = tf - half_width; t <= tf + half_width; ++t) {
            if (t == tf) continue;
            const double v = prices[static_cast<std::size_t>(t)];
            if (v >= center) is_max = false; // ties disqualify: centre must be unique
            if (v <= center) is_min = false;
            if (!is_max && !is_min) break;
        }
        if (is_max || is_min) {
            const double anchor = prices[static_cast<std::size_t>(tf - half_width)];
            const double r = (center - anchor) / anchor;
            events.push_back(
                {tf, is_max ? ExtremumKind::max : ExtremumKind::min, std::abs(r)});
        }
    }
    return events;
}

namespace {

struct SizeAccumulator {
    int n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double v) {
        ++n;
        sum += v;
        sum_sq += v * v;
    }
    double mean() const { return sum / n; }
    double stderr_mean() const {
        if (n < 2) return 0.0;
        double var = (sum_sq - sum * sum / n) / (n - 1);
        return std::sqrt(std::max(0.0, var) / n);
    }
};

} // namespace

CenteredHistogram aggregate(const Dataset& dataset, int half_width) {
    CenteredHistogram hist;
    hist.day_count = static_cast<int>(dataset.days.size());
    hist.half_width = half_width;
    hist.size_max_bpt.fill(kNaN);
    hist.size_max_stderr_bpt.fill(kNaN);
    hist.size_min_bpt.fill(kNaN);
    hist.size_min_stderr_bpt.fill(kNaN);
    if (hist.day_count == 0) return hist;

    constexpr std::array<Stream, 3> kStreams{Stream::high, Stream::low, Stream::close};

    // Extract events in parallel, then fold in day order so the floating
    // point sums are independent of the thread count.
    std::vector<std::array<std::vector<CenteredEvent>, 3>> per_day(
        static_cast<std::size_t>(hist.day_count));
#pragma omp parallel for schedule(static)
    for (int d = 0; d < hist.day_count; ++d) {
        const DayBars& day = dataset.days[static_cast<std::size_t>(d)];
        for (std::size_t s = 0; s < kStreams.size(); ++s)
            per_day[static_cast<std::size_t>(d)][s] =
                centered_extrema(stream_prices(day, kStreams[s]), half_width);
    }

    // kStreams[2] == close drives the occurrence counts.
    std::array<std::array<SizeAccumulator, kMinutesPerDay>, 3> acc_max{};
    std::array<std::array<SizeAccumulator, kMinutesPerDay>, 3> acc_min{};
    for (int d = 0; d < hist.day_count; ++d) {
        for (std::size_t s = 0; s < kStreams.size(); ++s) {
            for (const CenteredEvent& e : per_day[static_cast<std::size_t>(d)][s]) {
                const auto m = static_cast<std::size_t>(e.minute);
                if (e.kind == ExtremumKind::max)
                    acc_max[s][m].add(e.size_abs * kBptPerReturn);
                else
                    acc_min[s][m].add(e.size_abs * kBptPerReturn);
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

        // Streams are combined by arithmetic mean; the error follows from
        // Gaussian propagation over the per-stream standard errors.
        auto combine = [&](const std::array<std::array<SizeAccumulator, kMinutesPerDay>, 3>& acc,
                           double& mean_out, double& err_out) {
            int streams_present = 0;
            double mean_sum = 0.0, err_sq_sum = 0.0;
            for (std::size_t s = 0; s < 3; ++s) {
                if (acc[s][mu].n == 0) continue;
                ++streams_present;
                mean_sum += acc[s][mu].mean();
                const double e = acc[s][mu].stderr_mean();
                err_sq_sum += e * e;
            }
            if (streams_present > 0) {
                mean_out = mean_sum / streams_present;
                err_out = std::sqrt(err_sq_sum) / streams_present;
            }
        };
        combine(acc_max, hist.size_max_bpt[mu], hist.size_max_stderr_bpt[mu]);
        combine(acc_min, hist.size_min_bpt[mu], hist.size_min_stderr_bpt[mu]);
    }
    return hist;
}

CorrelationResult directional_correlation(std::span<const std::pair<Date, int>> events,
                                          const std::map<Date, double>& external,
                                          int permutations, std::uint64_t seed) {
    std::vector<double> x, y;
    for (const auto& [date, sign] : events) {
        auto it = external.find(date);
        if (it == external.end()) continue;
        x.push_back(sign > 0 ? 1.0 : (sign < 0 ? -1.0 : 0.0));
        y.push_back(it->second > 0 ? 1.0 : (it->second < 0 ? -1.0 : 0.0));
    }
    const int n = static_cast<int>(x.size());
    if (n < 10)
        throw InsufficientDataError("directional_correlation: only " + std::to_string(n) +
                                    " overlapping dates (need 10)");

    auto pearson = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double ma = 0.0, mb = 0.0;
        for (int i = 0; i < n; ++i) {
            ma += a[static_cast<std::size_t>(i)];
            mb += b[static_cast<std::size_t>(i)];
        }
        ma /= n;
        mb /= n;
        double sab = 0.0, saa = 0.0, sbb = 0.0;
        for (int i = 0; i < n; ++i) {
            const double da = a[static_cast<std::size_t>(i)] - ma;
            const double db = b[static_cast<std::size_t>(i)] - mb;
            sab += da * db;
            saa += da * da;
            sbb += db * db;
        }
        if (saa == 0.0 || sbb == 0.0) return 0.0; // a constant series carries no signal
        return sab / std::sqrt(saa * sbb);
    };

    CorrelationResult result;
    result.n = n;
    result.correlation = pearson(x, y);

    SimRng rng(seed);
    std::vector<double> shuffled = y;
    const double threshold = std::abs(result.correlation) - 1e-12;
    int at_least = 0;
    for (int p = 0; p < permutations; ++p) {
        for (int i = n - 1; i > 0; --i)
            std::swap(shuffled[static_cast<std::size_t>(i)],
                      shuffled[static_cast<std::size_t>(rng.uniform_int(0, i))]);
        if (std::abs(pearson(x, shuffled)) >= threshold) ++at_least;
    }
    result.p_value = static_cast<double>(1 + at_least) / (1 + permutations);
    return result;
}

void write_centered_csv(const std::filesystem::path& path, const CenteredHistogram& hist) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "minute,kind,count,probability,size_bpt,stderr_bpt\n";
    char buf[96];
    auto row = [&](int m, const char* kind, int count, double prob, double size, double err) {
        if (std::isnan(size))
            std::snprintf(buf, sizeof buf, "%d,%s,%d,%.10g,,", m, kind, count, prob);
        else
            std::snprintf(buf, sizeof buf, "%d,%s,%d,%.10g,%.10g,%.10g", m, kind, count, prob,
                          size, err);
        out << buf << '\n';
    };
    for (int m = 0; m < kMinutesPerDay; ++m) {
        const auto mu = static_cast<std::size_t>(m);
        row(m, "max", hist.count_max[mu], hist.prob_max[mu], hist.size_max_bpt[mu],
            hist.size_max_stderr_bpt[mu]);
        row(m, "min", hist.count_min[mu], hist.prob_min[mu], hist.size_min_bpt[mu],
            hist.size_min_stderr_bpt[mu]);
    }
}

} // namespace wmr
