#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "heftcom/leaderboard.hpp"
#include "heftcom/market.hpp"
#include "heftcom/strategy.hpp"
#include "heftcom/time.hpp"

namespace heftcom {

struct DataPaths {
    std::filesystem::path dir = "data";
    std::filesystem::path production = "production.csv";
    std::filesystem::path prices = "prices.csv";
    std::filesystem::path submissions = "submissions.csv";
    std::filesystem::path teams = "teams.csv";
    // optional schema mappings; canonical columns when absent
    std::optional<std::filesystem::path> production_mapping;
    std::optional<std::filesystem::path> prices_mapping;
    std::optional<std::filesystem::path> submissions_mapping;

    /// Relative paths resolve against `dir`.
    std::filesystem::path resolve(const std::filesystem::path& p) const;
};

struct AnalyticsSettings {
    double var_level = 0.05;
    double cost_bin_width = 5.0;  // MWh of pinball per opportunity-cost bin
    double histogram_width = 25.0;
    double histogram_min = -500.0;
    double histogram_max = 500.0;
    int warmup_days = 7;          // dropped from the risk-reward table
    int top_n = 10;
    double skill_threshold = 31.0;
    std::vector<std::string> skill_exclusions;
};

struct RunConfig {
    DataPaths data;
    std::filesystem::path out_dir = "out";
    Date window_start{std::chrono::year{2024}, std::chrono::February, std::chrono::day{20}};
    Date window_end{std::chrono::year{2024}, std::chrono::May, std::chrono::day{19}};
    DayConvention days = DayConvention::kLondon;
    double k = 0.07;
    BidBounds bounds;
    std::uint64_t seed = 20240220;
    std::vector<std::string> teams;  // empty: every team

    std::string benchmark_team = "Benchmark";
    bool fill_missing = true;
    LeaderboardRules rules;
    std::optional<std::string> sanitize_team;
    double sanity_limit = 3600.0;

    std::optional<std::string> strategy_source;  // default: best forecaster
    std::vector<StrategyKind> strategies{StrategyKind::kMedian, StrategyKind::kExpectedOptimal,
                                         StrategyKind::kLearned};
    int climatology_days = 28;
    std::size_t min_training_rows = 336;
    ExpectationRule expectation = ExpectationRule::kInterpolatedMean;

    AnalyticsSettings analytics;

    /// Throws ConfigError on an inverted window, bad numbers or missing input files.
    void validate(bool check_paths = true) const;

    /// Canonical text of every setting that affects results.
    std::string canonical_text() const;
    /// FNV-1a of `canonical_text()`, as 16 hex digits.
    std::string hash() const;

    /// Settings absent from the file keep their value in `defaults`.
    static RunConfig from_ini(std::istream& in, const RunConfig& defaults);
    static RunConfig from_ini(std::istream& in);
    static RunConfig from_file(const std::filesystem::path& path, const RunConfig& defaults);
    static RunConfig from_file(const std::filesystem::path& path);
};

/// Parses `YYYY-MM-DD:YYYY-MM-DD` (or `..` as separator).
std::pair<Date, Date> parse_window(std::string_view text);

std::vector<std::string> split_list(std::string_view text, char separator = ',');

std::uint64_t fnv1a(std::string_view text);

}  // namespace heftcom
