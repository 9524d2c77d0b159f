#include "wmr/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "json.hpp"

#include "wmr/pipeline.hpp"

namespace wmr {

namespace fs = std::filesystem;

namespace {

std::string utc_stamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
    return buf;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::int64_t data_rows(const fs::path& file) {
    std::ifstream in(file);
    std::int64_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    return std::max<std::int64_t>(0, lines - 1); // minus header
}

struct RunContext {
    RunConfig cfg;
    RunOptions opts;
    fs::path dir;
    std::map<std::string, std::int64_t> row_counts;

    const PairConfig& pair() const { return select_pair(cfg, opts.pair); }

    std::string period() const { return opts.period.empty() ? cfg.period : opts.period; }

    void note(const fs::path& file) { row_counts[file.filename().string()] = data_rows(file); }
};

Dataset select_period(Dataset full, const std::string& period) {
    if (period == "full") return full;
    auto [pre, post] = split_periods(full);
    Dataset out = period == "pre" ? std::move(pre) : std::move(post);
    out.excluded_days = full.excluded_days;
    return out;
}

Dataset load_dataset(RunContext& ctx) {
    Dataset ds;
    if (!ctx.cfg.inputs.bars_csv.empty()) {
        const auto parsed = parse_bar_csv(ctx.cfg.inputs.bars_csv);
        for (const auto& issue : parsed.issues)
            std::cerr << "warning: " << ctx.cfg.inputs.bars_csv << ": " << issue.message << '\n';
        ds = filter_complete_days(parsed.days, ctx.pair().pair);
    } else if (ctx.cfg.scenario) {
        SimScenario s = *ctx.cfg.scenario;
        if (ctx.opts.seed) s.seed = *ctx.opts.seed;
        if (ctx.opts.days) s.day_count = *ctx.opts.days;
        ds = simulate_dataset(s);
        ds.pair = ctx.pair().pair;
    } else {
        throw ConfigError("no bars_csv input and no scenario configured");
    }
    if (ds.excluded_days > 0)
        std::cerr << "warning: excluded " << ds.excluded_days << " incomplete day(s)\n";
    return select_period(std::move(ds), ctx.period());
}

SimScenario scenario_or_throw(const RunContext& ctx) {
    if (!ctx.cfg.scenario) throw ConfigError("subcommand requires a scenario in the config");
    SimScenario s = *ctx.cfg.scenario;
    if (ctx.opts.seed) s.seed = *ctx.opts.seed;
    if (ctx.opts.days) s.day_count = *ctx.opts.days;
    return s;
}

void cmd_simulate(RunContext& ctx) {
    const SimScenario s = scenario_or_throw(ctx);
    const fs::path tick_dir = ctx.dir / "ticks";
    fs::create_directories(tick_dir);

    std::vector<fs::path> files(static_cast<std::size_t>(s.day_count));
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < s.day_count; ++d) {
        const Date date = scenario_date(s, d);
        const auto ticks = gen_day(s, d);
        const fs::path file = tick_dir / ("day-" + format_date(date) + ".csv");
        write_tick_csv(file, ticks);
        files[static_cast<std::size_t>(d)] = file;
    }

    Dataset ds = simulate_dataset(s);
    ds.pair = ctx.pair().pair;
    const fs::path bars = ctx.dir / "bars.csv";
    write_bar_csv(bars, ds);
    ctx.note(bars);
    std::int64_t tick_rows = 0;
    for (const auto& f : files) tick_rows += data_rows(f);
    ctx.row_counts["ticks/*"] = tick_rows;
}

void write_fix_report(const fs::path& file, const std::vector<DayFix>& fixes) {
    std::ofstream out(file);
    if (!out) throw ParseError("cannot write " + file.string());
    out << "date,mid,fix_bid,fix_ask,spread_used,market_spread,n_trade_points,"
           "used_quote_fallback,source_used,error\n";
    for (const auto& df : fixes) {
        out << format_date(df.date) << ',';
        if (df.ok) {
            out << fmt(df.fix.mid()) << ',' << fmt(df.fix.fix_bid()) << ','
                << fmt(df.fix.fix_ask()) << ',' << fmt(df.fix.spread_used.rate()) << ','
                << fmt(df.fix.market_spread.rate()) << ',' << df.fix.n_trade_points << ','
                << (df.fix.used_quote_fallback ? 1 : 0) << ',' << df.fix.source_used << ',';
        } else {
            out << ",,,,,,,," << df.error;
        }
        out << '\n';
    }
}

void cmd_fix(RunContext& ctx) {
    const PairConfig& pair = ctx.pair();
    std::vector<DayFix> fixes;

    if (!ctx.cfg.inputs.ticks_dir.empty()) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(ctx.cfg.inputs.ticks_dir))
            if (entry.path().extension() == ".csv") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            const auto ticks = parse_tick_csv(file);
            DayFix df;
            if (ticks.empty()) continue;
            df.date = civil_from_days(static_cast<int>(
                (event_ts(ticks.front()) + kMsPerHour) / kMsPerDay)); // London label of the day
            const TimestampMs center =
                london_day_start_ms(df.date) + pair.fix_minute_local * kMsPerMinute;
            try {
                df.fix = fix_for_ticks(ticks, pair, center);
                df.ok = true;
            } catch (const std::exception& e) {
                df.error = e.what();
            }
            fixes.push_back(std::move(df));
        }
    } else {
        const SimScenario s = scenario_or_throw(ctx);
        fixes = fix_simulated_days(s, pair);
    }

    const fs::path report = ctx.dir / "fix_report.csv";
    write_fix_report(report, fixes);
    ctx.note(report);
}

void cmd_vol(RunContext& ctx, const Dataset& ds) {
    const auto matrix = minute_returns(ds, Stream::close);
    const auto profile = vol_profile(matrix);
    const auto flags =
        detect_spikes(profile, ctx.cfg.analysis.spike_window, ctx.cfg.analysis.spike_z);

    const fs::path prof = ctx.dir / "vol_profile.csv";
    write_profile_csv(prof, profile);
    ctx.note(prof);
    const fs::path spikes = ctx.dir / "vol_spikes.csv";
    write_spikes_csv(spikes, flags);
    ctx.note(spikes);
}

void cmd_extrema(RunContext& ctx, const Dataset& ds) {
    std::vector<ExtremaSurface> surfaces;
    for (IntervalSide side : {IntervalSide::int1, IntervalSide::int2})
        for (ExtremumKind kind : {ExtremumKind::max, ExtremumKind::min})
            for (Stream stream : {Stream::high, Stream::low, Stream::close})
                surfaces.push_back(build_surface(ds, side, kind, stream, ctx.cfg.analysis.grid));
    const fs::path file = ctx.dir / "extrema_surface.csv";
    write_surfaces_csv(file, surfaces);
    ctx.note(file);
}

void cmd_centered(RunContext& ctx, const Dataset& ds) {
    const auto hist = aggregate(ds, ctx.cfg.analysis.centered_half_width);
    const fs::path file = ctx.dir / "centered_histogram.csv";
    write_centered_csv(file, hist);
    ctx.note(file);

    if (ctx.cfg.inputs.external_returns_csv.empty()) return;

    // Directional check: sign of the centred extremum at the fix minute
    // (closing stream) against the external daily return.
    const auto external = parse_daily_returns_csv(ctx.cfg.inputs.external_returns_csv);
    const int fix_minute = ctx.pair().fix_minute_local;
    std::vector<std::pair<Date, int>> events;
    for (const auto& day : ds.days) {
        for (const auto& e :
             centered_extrema(stream_prices(day, Stream::close),
                              ctx.cfg.analysis.centered_half_width)) {
            if (e.minute == fix_minute)
                events.emplace_back(day.date, e.kind == ExtremumKind::max ? 1 : -1);
        }
    }
    const auto corr = directional_correlation(events, external, ctx.cfg.analysis.permutations,
                                              ctx.cfg.analysis.analysis_seed);
    const fs::path cfile = ctx.dir / "correlation.csv";
    std::ofstream out(cfile);
    out << "correlation,p_value,n\n"
        << fmt(corr.correlation) << ',' << fmt(corr.p_value) << ',' << corr.n << '\n';
    ctx.note(cfile);
}

void write_manifest(RunContext& ctx) {
    nlohmann::json m;
    m["tool"] = "wmrfix";
    m["version"] = "0.1.0";
    m["subcommand"] = ctx.opts.subcommand;
    m["timestamp_utc"] = utc_stamp_now();
    m["config"] = nlohmann::json::parse(ctx.cfg.raw_json);
    if (ctx.opts.seed) m["seed_override"] = *ctx.opts.seed;
    if (ctx.opts.days) m["days_override"] = *ctx.opts.days;
    if (!ctx.opts.pair.empty()) m["pair_override"] = ctx.opts.pair;
    m["period"] = ctx.period();
    if (ctx.cfg.scenario) {
        const SimScenario s = scenario_or_throw(ctx);
        m["effective_seed"] = s.seed;
        m["effective_day_count"] = s.day_count;
    }
    m["analysis_seed"] = ctx.cfg.analysis.analysis_seed;
    nlohmann::json rows;
    for (const auto& [file, count] : ctx.row_counts) rows[file] = count;
    m["row_counts"] = rows;
    std::ofstream out(ctx.dir / "manifest.json");
    out << m.dump(2) << '\n';
}

} // namespace

fs::path make_run_directory(const fs::path& out_root) {
    fs::create_directories(out_root);
    const std::string stamp = utc_stamp_now();
    for (int n = 0;; ++n) {
        fs::path candidate =
            out_root / ("run-" + stamp + (n == 0 ? std::string{} : "-" + std::to_string(n)));
        if (!fs::exists(candidate)) {
            fs::create_directories(candidate);
            return candidate;
        }
    }
}

int run(const RunOptions& options) {
    try {
        RunContext ctx;
        ctx.opts = options;
        ctx.cfg = load_run_config(options.config_path);
        if (!options.out_dir.empty()) ctx.cfg.output_dir = options.out_dir;
        ctx.pair(); // validate the pair override early
        ctx.dir = make_run_directory(ctx.cfg.output_dir);
        std::cout << "output_dir: " << ctx.dir.string() << std::endl;

        const std::string& cmd = options.subcommand;
        if (cmd == "simulate") {
            cmd_simulate(ctx);
        } else if (cmd == "fix") {
            cmd_fix(ctx);
        } else if (cmd == "vol" || cmd == "extrema" || cmd == "centered" || cmd == "report") {
            const Dataset ds = load_dataset(ctx);
            if (cmd == "vol") {
                cmd_vol(ctx, ds);
            } else if (cmd == "extrema") {
                cmd_extrema(ctx, ds);
            } else if (cmd == "centered") {
                cmd_centered(ctx, ds);
            } else {
                if (ctx.cfg.scenario) cmd_fix(ctx);
                cmd_vol(ctx, ds);
                cmd_extrema(ctx, ds);
                cmd_centered(ctx, ds);
                const fs::path bars = ctx.dir / "bars.csv";
                write_bar_csv(bars, ds);
                ctx.note(bars);
            }
        } else {
            std::cerr << "error: unknown subcommand '" << cmd << "'\n";
            return 2;
        }
        write_manifest(ctx);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 4;
    } catch (const NoDataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 5;
    } catch (const DomainError& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return 5;
    } catch (const ComputeError& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return 5;
    } catch (const InsufficientDataError& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace wmr
