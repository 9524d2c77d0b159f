#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "wmr/run_config.hpp"

namespace wmr {

struct RunOptions {
    std::string subcommand; // simulate | fix | vol | extrema | centered | report
    std::string config_path;
    std::string pair;   // overrides; empty keeps the config value
    std::string period;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> days;
};

/// Execute one batch subcommand. Returns 0 on success; 3 for configuration
/// errors, 4 for input parse/IO errors, 5 for analysis/no-data errors.
/// Artifacts land in a fresh timestamped directory under the output root,
/// whose path is printed as `output_dir: <path>`.
int run(const RunOptions& options);

/// Create out_root/run-<UTC stamp>[-n], never reusing an existing directory.
std::filesystem::path make_run_directory(const std::filesystem::path& out_root);

} // namespace wmr
