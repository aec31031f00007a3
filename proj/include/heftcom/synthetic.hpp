#pragma once

// Seeded synthetic competition: production, prices, team submissions and
// metadata with the same layout as the archive's canonical files.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "heftcom/app.hpp"
#include "heftcom/ingest.hpp"

namespace heftcom {

struct SyntheticTeam {
    std::string name;
    double noise_mwh = 40.0;     // sd of the median forecast error
    double bid_offset = 0.0;     // bid = clamp(q50 + offset)
    int missed_days = 0;         // leading market days without a submission
    bool report = true;
    bool student = false;
    bool organiser = false;
};

struct SyntheticOptions {
    Date start{std::chrono::year{2024}, std::chrono::February, std::chrono::day{20}};
    Date end{std::chrono::year{2024}, std::chrono::March, std::chrono::day{10}};
    DayConvention days = DayConvention::kLondon;
    std::uint64_t seed = 7;
    int history_days = 35;  // realised data before the window
    std::vector<SyntheticTeam> teams{
        {"Benchmark", 90.0, 0.0, 0, true, false, true},
        {"Alpha", 25.0, 0.0, 0, true, false, false},
        {"Bravo", 35.0, 10.0, 1, true, true, false},
        {"Charlie", 45.0, -20.0, 0, true, false, false},
        {"Delta", 60.0, 0.0, 6, true, false, false},
        {"Echo", 50.0, 5.0, 2, false, false, false},
    };
};

struct SyntheticCompetition {
    std::vector<CanonicalProductionRow> production;
    std::vector<MarketPrices> prices;
    std::vector<SubmissionRow> submissions;
    std::vector<TeamMetadata> teams;
};

SyntheticCompetition generate_synthetic(const SyntheticOptions& options);

/// Writes production.csv, prices.csv, submissions.csv and teams.csv.
void write_synthetic(const SyntheticCompetition& competition, const std::filesystem::path& dir);

}  // namespace heftcom
