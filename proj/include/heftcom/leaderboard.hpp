#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heftcom/market.hpp"
#include "heftcom/series.hpp"

namespace heftcom {

struct TeamRecord {
    std::string name;
    TeamSeries series;
    int missed_submissions = 0;
    bool report_submitted = false;
    bool student = false;
    bool organiser = false;  // run by the organisers, never ranked
};

struct FillResult {
    TeamSeries series;
    std::vector<Date> missed_days;      // whole days taken from the benchmark
    std::size_t partial_periods = 0;    // single periods filled inside submitted days
};

/// Replaces every market day without a submission by the benchmark's
/// forecasts and bids for that day, flagging the filled periods. Rows
/// outside `days` are dropped.
FillResult fill_missing(const TeamSeries& team, const TeamSeries& benchmark, std::span<const Date> days,
                        DayConvention convention);

struct LeaderboardRules {
    int max_missed = 5;
    bool require_report = true;
};

bool is_eligible(const TeamRecord& team, const LeaderboardRules& rules);

struct LeaderboardRow {
    std::string team;
    double pinball = 0.0;    // MWh
    double revenue_m = 0.0;  // £m
    std::optional<int> forecast_rank;
    std::optional<int> trading_rank;
    std::optional<int> combined_rank;
    bool eligible = false;
    bool report = false;
    int missed = 0;
    bool student = false;
    bool pinball_tie = false;  // exact tie resolved by team name
    bool revenue_tie = false;
    std::size_t scored_periods = 0;
    std::size_t sanitized_periods = 0;
};

/// Assigns forecast (ascending pinball), trading (descending revenue) and
/// combined (ascending rank sum, ties to the better forecast rank) ranks to
/// eligible rows, then orders all rows by pinball.
void rank_leaderboard(std::vector<LeaderboardRow>& rows);

struct ScoringOptions {
    /// Team whose implausible quantiles are dropped from its pinball score.
    std::optional<std::string> sanitize_team;
    /// Quantiles above this (MWh) count as implausible.
    double sanity_limit = 3600.0;
};

/// Scores and ranks every team. All teams must cover the same scored periods.
std::vector<LeaderboardRow> build_leaderboard(std::span<const TeamRecord> teams, const MarketData& market,
                                              MarketImpactCoefficient k, const LeaderboardRules& rules,
                                              const ScoringOptions& scoring = {});

/// Mean pinball of a team over periods with actuals, optionally skipping
/// periods whose quantiles exceed `sanity_limit`.
struct TeamPinball {
    double pinball = 0.0;
    std::size_t scored = 0;
    std::size_t sanitized = 0;
};

TeamPinball team_pinball(const TeamSeries& series, const ProductionSeries& actuals,
                         std::optional<double> sanity_limit = std::nullopt);

}  // namespace heftcom
