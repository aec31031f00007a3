#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "heftcom/app.hpp"
#include "heftcom/config.hpp"
#include "heftcom/error.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::optional<std::string> data_dir;
    std::optional<std::string> out_dir;
    std::optional<std::string> window;
    std::optional<std::string> days;
    std::optional<double> k;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> teams;
    bool sanitize_probprofit = false;
};

heftcom::RunConfig resolve(const Overrides& o) {
    heftcom::RunConfig config = o.config ? heftcom::RunConfig::from_file(*o.config) : heftcom::RunConfig{};
    if (o.data_dir) {
        config.data.dir = *o.data_dir;
    }
    if (o.out_dir) {
        config.out_dir = *o.out_dir;
    }
    if (o.window) {
        std::tie(config.window_start, config.window_end) = heftcom::parse_window(*o.window);
    }
    if (o.days) {
        config.days = heftcom::parse_day_convention(*o.days);
    }
    if (o.k) {
        config.k = *o.k;
    }
    if (o.seed) {
        config.seed = *o.seed;
    }
    if (o.teams) {
        config.teams = heftcom::split_list(*o.teams);
    }
    if (o.sanitize_probprofit) {
        config.sanitize_team = "ProbProfit";
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Replay and analyse a day-ahead forecasting and trading competition"};
    app.require_subcommand(1);
    Overrides o;
    app.add_option("--config", o.config, "INI run configuration")->check(CLI::ExistingFile);
    app.add_option("--data-dir", o.data_dir, "directory holding the input tables");
    app.add_option("--out-dir", o.out_dir, "directory for output tables");
    app.add_option("--window", o.window, "competition window, e.g. 2024-02-20:2024-05-19");
    app.add_option("--days", o.days, "market-day convention: london or utc");
    app.add_option("--k", o.k, "price impact coefficient in GBP/MWh per MWh");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--teams", o.teams, "comma-separated teams to evaluate");
    app.add_flag("--sanitize-probprofit", o.sanitize_probprofit,
                 "drop ProbProfit's implausible quantiles from its pinball score");

    const char* descriptions[][2] = {
        {"score", "pinball scores, reliability and expanding pinball"},
        {"trade", "revenue, trade statistics and trading analytics"},
        {"leaderboard", "final ranking table and skill-value regression"},
        {"strategy-backtest", "compare bidding strategies on one team's forecasts"},
        {"validate-data", "load and align the inputs and report problems"},
    };
    for (const auto& [name, description] : descriptions) {
        app.add_subcommand(name, description)->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    heftcom::RunConfig config;
    try {
        config = resolve(o);
    } catch (const heftcom::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return heftcom::run_command(app.get_subcommands().front()->get_name(), config, std::cerr);
}
