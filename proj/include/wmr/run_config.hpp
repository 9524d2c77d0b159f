#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wmr/analysis_extrema.hpp"
#include "wmr/simulator.hpp"
#include "wmr/types.hpp"

namespace wmr {

/// Configuration problem (bad JSON, unknown values, unresolvable paths).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AnalysisParams {
    int spike_window = 30;
    double spike_z = 4.0;
    SurfaceGrid grid;
    int centered_half_width = 20;
    int permutations = 10'000;
    std::uint64_t analysis_seed = 0x5EED;
};

struct InputPaths {
    std::string bars_csv;
    std::string ticks_dir;
    std::string external_returns_csv;
};

/// Parsed run configuration; every knob the methodology leaves open
/// (fallback threshold, quality tolerance, spike criterion, manipulation
/// timing) surfaces here.
struct RunConfig {
    std::vector<PairConfig> pairs;
    std::optional<SimScenario> scenario;
    InputPaths inputs;
    std::string output_dir = "out";
    std::string period = "full"; // pre | post | full
    AnalysisParams analysis;
    std::string raw_json; // snapshot for the manifest
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& json_text, const std::string& origin);

const PairConfig& select_pair(const RunConfig& cfg, const std::string& pair_code);

} // namespace wmr
