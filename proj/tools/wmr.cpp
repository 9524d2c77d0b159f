// Batch front end: simulate ticks, compute fixes, and emit plot-ready
// analysis CSVs from a single JSON config.

#include <optional>
#include <string>

#include "CLI11.hpp"

#include "wmr/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"WM/R 4pm fix engine, tick-market simulator and microstructure analyses"};
    app.require_subcommand(1);

    wmr::RunOptions opts;
    std::optional<std::uint64_t> seed;
    std::optional<int> days;

    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        auto* c = sub->add_option("--config", opts.config_path, "JSON run configuration");
        if (needs_config) c->required();
        sub->add_option("--pair", opts.pair, "currency pair code (defaults to first in config)");
        sub->add_option("--period", opts.period, "pre|post|full")
            ->check(CLI::IsMember({"pre", "post", "full"}));
        sub->add_option("--out", opts.out_dir, "output root (overrides config)");
        sub->add_option("--seed", seed, "scenario seed override");
        sub->add_option("--days", days, "scenario day count override");
    };

    add_common(app.add_subcommand("simulate", "generate tick CSVs and minute bars"));
    add_common(app.add_subcommand("fix", "compute the benchmark fix per day"));
    add_common(app.add_subcommand("vol", "per-minute volatility profile and spike flags"));
    add_common(app.add_subcommand("extrema", "extreme period-return probability surfaces"));
    add_common(app.add_subcommand("centered", "centred-extremum histogram and sizes"));
    add_common(app.add_subcommand("report", "full pipeline plus run manifest"));

    CLI11_PARSE(app, argc, argv);

    opts.subcommand = app.get_subcommands().front()->get_name();
    opts.seed = seed;
    opts.days = days;
    return wmr::run(opts);
}
