#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heftcom/analytics.hpp"
#include "heftcom/csv.hpp"
#include "heftcom/leaderboard.hpp"

namespace heftcom::testing {

/// One row of the published final results table.
struct PublishedResult {
    std::string team;
    double pinball = 0.0;
    double revenue_m = 0.0;
    std::optional<int> forecast_rank;
    std::optional<int> trading_rank;
    std::optional<int> combined_rank;
    bool report = false;
    int missed = 0;
    bool student = false;
    bool organiser = false;
};

inline std::vector<PublishedResult> published_results() {
    const auto table = read_csv_file(std::string(HEFTCOM_REFERENCE_DIR) + "/final_results.csv");
    const auto col = [&](const char* name) { return *table.find_column(name); };
    const auto rank = [](const std::string& s) -> std::optional<int> {
        if (s.empty()) {
            return std::nullopt;
        }
        return std::stoi(s);
    };
    std::vector<PublishedResult> out;
    for (const auto& r : table.rows) {
        PublishedResult p;
        p.team = r[col("team")];
        p.pinball = parse_number(r[col("pinball_mwh")]);
        p.revenue_m = parse_number(r[col("revenue_m")]);
        p.forecast_rank = rank(r[col("forecast_rank")]);
        p.trading_rank = rank(r[col("trading_rank")]);
        p.combined_rank = rank(r[col("combined_rank")]);
        p.report = r[col("report")] == "TRUE";
        p.missed = std::stoi(r[col("missed")]);
        p.student = r[col("student")] == "TRUE";
        p.organiser = r[col("organiser")] == "TRUE";
        out.push_back(p);
    }
    return out;
}

inline std::vector<SkillPoint> published_skill_points() {
    std::vector<SkillPoint> out;
    for (const auto& p : published_results()) {
        out.push_back({p.team, p.pinball, p.revenue_m});
    }
    return out;
}

/// Leaderboard rows rebuilt from the published scores, ready for ranking.
inline std::vector<LeaderboardRow> published_rows(const LeaderboardRules& rules = {}) {
    std::vector<LeaderboardRow> rows;
    for (const auto& p : published_results()) {
        LeaderboardRow row;
        row.team = p.team;
        row.pinball = p.pinball;
        row.revenue_m = p.revenue_m;
        row.report = p.report;
        row.missed = p.missed;
        row.student = p.student;
        TeamRecord record{p.team, {}, p.missed, p.report, p.student, p.organiser};
        row.eligible = is_eligible(record, rules);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace heftcom::testing
