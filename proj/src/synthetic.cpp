#include "heftcom/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "heftcom/csv.hpp"
#include "heftcom/error.hpp"

namespace heftcom {

namespace {

constexpr std::array<double, kLevelCount> kStandardNormalQuantiles = {
    -1.2815515655446004, -0.8416212335729143, -0.5244005127080407, -0.2533471031357997, 0.0,
    0.2533471031357997,  0.5244005127080407,  0.8416212335729143,  1.2815515655446004};

constexpr double kWindCapacity = 600.0;   // MWh per half-hour
constexpr double kSolarCapacity = 250.0;

double logistic(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

}  // namespace

SyntheticCompetition generate_synthetic(const SyntheticOptions& options) {
    if (options.end < options.start) {
        throw InvalidInputError("synthetic window end precedes start");
    }
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const Date first{std::chrono::sys_days{options.start} - std::chrono::days{options.history_days}};
    SyntheticCompetition out;
    double wind_state = 0.0;
    double cloud_state = 0.0;
    for (const Date day : market_days(first, options.end)) {
        const double daily_level = 10.0 * normal(rng);
        for (const Period p : market_day_periods(day, options.days)) {
            const double hour = static_cast<double>(slot_of_day(p)) / 2.0;
            wind_state = 0.97 * wind_state + 0.25 * normal(rng);
            cloud_state = 0.95 * cloud_state + 0.3 * normal(rng);
            const double daylight = std::max(0.0, std::sin(std::numbers::pi * (hour - 6.0) / 12.0));

            CanonicalProductionRow row;
            row.period = p;
            row.wind_mwh = std::round(kWindCapacity * logistic(wind_state + 0.5) * 1000.0) / 1000.0;
            row.solar_mwh = std::round(kSolarCapacity * daylight * logistic(cloud_state + 1.0) * 1000.0) / 1000.0;
            row.total_mwh = *row.wind_mwh + *row.solar_mwh;
            out.production.push_back(row);

            const double da = 60.0 + 15.0 * std::sin(2.0 * std::numbers::pi * (hour - 8.0) / 24.0) + daily_level +
                              3.0 * normal(rng);
            const double spread_mean = 8.0 * std::sin(2.0 * std::numbers::pi * hour / 24.0);
            const double ss = da + spread_mean + 20.0 * normal(rng);
            out.prices.push_back({p, std::round(da * 100.0) / 100.0, std::round(ss * 100.0) / 100.0});
        }
    }

    std::map<Period, double> actual;
    for (const auto& r : out.production) {
        actual[r.period] = r.total_mwh;
    }
    const auto window = market_days(options.start, options.end);
    const BidBounds bounds;
    for (const auto& team : options.teams) {
        out.teams.push_back({team.name, team.report, team.student, team.organiser});
        for (std::size_t d = 0; d < window.size(); ++d) {
            const bool missed = static_cast<int>(d) < team.missed_days;
            for (const Period p : market_day_periods(window[d], options.days)) {
                // draw even for missed days so other days do not depend on missed_days
                const double error = team.noise_mwh * normal(rng);
                if (missed) {
                    continue;
                }
                const double median = actual.at(p) + error;
                SubmissionRow row;
                row.team = team.name;
                row.market_day = window[d];
                row.period = p;
                for (std::size_t j = 0; j < kLevelCount; ++j) {
                    const double v = median + team.noise_mwh * kStandardNormalQuantiles[j];
                    row.q[j] = std::round(std::max(0.0, v) * 1000.0) / 1000.0;
                }
                row.bid = std::round(bounds.clamp(row.q[kMedianIndex] + team.bid_offset) * 1000.0) / 1000.0;
                out.submissions.push_back(row);
            }
        }
    }
    return out;
}

void write_synthetic(const SyntheticCompetition& competition, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_for_write(dir / "production.csv");
        write_production(out, competition.production);
    }
    {
        auto out = open_for_write(dir / "prices.csv");
        write_prices(out, competition.prices);
    }
    {
        auto out = open_for_write(dir / "submissions.csv");
        write_submissions(out, competition.submissions);
    }
    auto out = open_for_write(dir / "teams.csv");
    CsvWriter writer(out, {"team", "report", "student", "organiser"});
    for (const auto& t : competition.teams) {
        writer.row({t.team, t.report ? "TRUE" : "FALSE", t.student ? "TRUE" : "FALSE", t.organiser ? "TRUE" : "FALSE"});
    }
}

}  // namespace heftcom
