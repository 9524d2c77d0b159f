#include "wmr/run_config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wmr {

namespace {

using nlohmann::json;

// Prices may be given as exact decimal strings ("0.0002") or as numbers.
Price price_field(const json& j, const char* key, Price fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_string()) return parse_price(v.get<std::string>());
    return price_from_rate(v.get<double>());
}

PairConfig parse_pair(const json& j) {
    PairConfig p;
    p.pair = j.value("pair", std::string("SIM"));
    const std::string cls = j.value("currency_class", std::string("trade"));
    if (cls == "trade")
        p.currency_class = CurrencyClass::trade;
    else if (cls == "quote")
        p.currency_class = CurrencyClass::quote;
    else
        throw ConfigError("currency_class must be trade or quote, got '" + cls + "'");
    p.standard_spread = price_field(j, "standard_spread", p.standard_spread);
    if (j.contains("sources")) p.sources = j.at("sources").get<std::vector<std::string>>();
    if (j.contains("fix_time")) p.fix_minute_local = parse_hhmm(j.at("fix_time").get<std::string>());
    const std::string meth = j.value("methodology", std::string("pre2015"));
    if (meth == "pre2015")
        p.methodology = Methodology::pre2015;
    else if (meth == "post2015")
        p.methodology = Methodology::post2015;
    else
        throw ConfigError("methodology must be pre2015 or post2015, got '" + meth + "'");
    p.min_trade_intervals = j.value("min_trade_intervals", p.min_trade_intervals);
    p.quality_tolerance = j.value("quality_tolerance", p.quality_tolerance);
    p.tick_size = price_field(j, "tick_size", p.tick_size);
    if (p.standard_spread <= 0) throw ConfigError("standard_spread must be positive");
    return p;
}

SimScenario parse_scenario(const json& j) {
    SimScenario s;
    s.seed = j.value("seed", s.seed);
    s.day_count = j.value("day_count", s.day_count);
    if (j.contains("start_date")) s.start_date = parse_date(j.at("start_date").get<std::string>());
    if (j.contains("base_price")) {
        const auto& v = j.at("base_price");
        s.base_price = v.is_string() ? to_rate(parse_price(v.get<std::string>()))
                                     : v.get<double>();
    }
    s.step_vol = j.value("step_vol", s.step_vol);
    s.base_spread = j.value("base_spread", s.base_spread);
    s.tick_rate = j.value("tick_rate", s.tick_rate);
    if (j.contains("fix_time")) s.fix_minute_local = parse_hhmm(j.at("fix_time").get<std::string>());
    s.window_half_width_ms = j.value("window_half_width_ms", s.window_half_width_ms);
    s.compression_factor = j.value("compression_factor", s.compression_factor);
    s.flow_imbalance = j.value("flow_imbalance", s.flow_imbalance);
    s.daily_random_direction = j.value("daily_random_direction", s.daily_random_direction);
    s.flow_lead_ms = j.value("flow_lead_ms", s.flow_lead_ms);
    s.impact_per_trade = j.value("impact_per_trade", s.impact_per_trade);
    s.impact_reversion_s = j.value("impact_reversion_s", s.impact_reversion_s);
    const std::string manip = j.value("manipulation", std::string("off"));
    if (manip == "off")
        s.manipulation = Manipulation::off;
    else if (manip == "end-of-interval")
        s.manipulation = Manipulation::end_of_interval;
    else
        throw ConfigError("manipulation must be off or end-of-interval, got '" + manip + "'");
    s.manipulation_size = j.value("manipulation_size", s.manipulation_size);
    s.manipulation_direction = j.value("manipulation_direction", s.manipulation_direction);
    s.manipulation_tail_ms = j.value("manipulation_tail_ms", s.manipulation_tail_ms);
    s.tick_size = price_field(j, "tick_size", s.tick_size);
    s.source = j.value("source", s.source);
    if (s.day_count < 0) throw ConfigError("day_count must be non-negative");
    if (s.tick_rate <= 0) throw ConfigError("tick_rate must be positive");
    if (s.step_vol < 0) throw ConfigError("step_vol must be non-negative");
    if (std::abs(s.flow_imbalance) > 1.0) throw ConfigError("flow_imbalance must be in [-1, 1]");
    return s;
}

AnalysisParams parse_analysis(const json& j) {
    AnalysisParams a;
    a.spike_window = j.value("spike_window", a.spike_window);
    a.spike_z = j.value("spike_z", a.spike_z);
    a.grid.first_hour = j.value("tf_first_hour", a.grid.first_hour);
    a.grid.last_hour = j.value("tf_last_hour", a.grid.last_hour);
    a.grid.dt_min = j.value("dt_min", a.grid.dt_min);
    a.grid.dt_max = j.value("dt_max", a.grid.dt_max);
    a.centered_half_width = j.value("centered_half_width", a.centered_half_width);
    a.permutations = j.value("permutations", a.permutations);
    a.analysis_seed = j.value("analysis_seed", a.analysis_seed);
    return a;
}

} // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    try {
        RunConfig cfg;
        cfg.raw_json = j.dump(2);
        if (j.contains("pairs"))
            for (const auto& pj : j.at("pairs")) cfg.pairs.push_back(parse_pair(pj));
        if (cfg.pairs.empty()) cfg.pairs.push_back(PairConfig{});
        if (j.contains("scenario")) cfg.scenario = parse_scenario(j.at("scenario"));
        if (j.contains("inputs")) {
            const auto& in = j.at("inputs");
            cfg.inputs.bars_csv = in.value("bars_csv", std::string{});
            cfg.inputs.ticks_dir = in.value("ticks_dir", std::string{});
            cfg.inputs.external_returns_csv = in.value("external_returns_csv", std::string{});
        }
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
        cfg.period = j.value("period", cfg.period);
        if (cfg.period != "pre" && cfg.period != "post" && cfg.period != "full")
            throw ConfigError("period must be pre, post or full");
        if (j.contains("analysis")) cfg.analysis = parse_analysis(j.at("analysis"));
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path.string());
}

const PairConfig& select_pair(const RunConfig& cfg, const std::string& pair_code) {
    if (pair_code.empty()) return cfg.pairs.front();
    for (const auto& p : cfg.pairs)
        if (p.pair == pair_code) return p;
    throw ConfigError("pair '" + pair_code + "' not present in config");
}

} // namespace wmr
