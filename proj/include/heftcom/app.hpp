#pragma once

// Loading a competition archive and running the reporting commands over it.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "heftcom/config.hpp"
#include "heftcom/ingest.hpp"
#include "heftcom/leaderboard.hpp"

namespace heftcom {

struct TeamMetadata {
    std::string team;
    bool report = false;
    bool student = false;
    bool organiser = false;
};

/// Reads `team,report,student,organiser` rows.
std::map<std::string, TeamMetadata> load_team_metadata(const std::filesystem::path& path);

struct Competition {
    RunConfig config;
    std::vector<Date> days;
    std::vector<Period> window_periods;
    MarketData market;   // restricted to included periods
    MarketData history;  // everything loaded; strategy inputs before the window
    Alignment alignment;
    std::vector<TeamRecord> teams;  // sorted by name, benchmark-filled
    std::map<std::string, std::size_t> partial_fills;
    std::vector<std::pair<std::string, ValidationReport>> reports;
    std::vector<std::string> warnings;
};

Competition load_competition(const RunConfig& config);

/// Each command writes its tables under `config.out_dir` and returns the paths
/// it declared; a declared file that does not exist afterwards is an error.
std::vector<std::filesystem::path> cmd_score(const Competition& competition);
std::vector<std::filesystem::path> cmd_trade(const Competition& competition);
std::vector<std::filesystem::path> cmd_leaderboard(const Competition& competition);
std::vector<std::filesystem::path> cmd_strategy_backtest(const Competition& competition);
std::vector<std::filesystem::path> cmd_validate_data(const Competition& competition);

/// Runs a named subcommand; returns the process exit status.
int run_command(const std::string& command, const RunConfig& config, std::ostream& log);

}  // namespace heftcom
