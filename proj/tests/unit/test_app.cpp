#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "heftcom/app.hpp"
#include "heftcom/csv.hpp"
#include "heftcom/error.hpp"
#include "heftcom/synthetic.hpp"

namespace heftcom {
namespace {

using testing::day;

/// Small competition written to disk in canonical form.
class Fixture {
public:
    Fixture(Date start, Date end) {
        config_.data.dir = tmp_ / "data";
        config_.out_dir = tmp_ / "out";
        config_.window_start = start;
        config_.window_end = end;
        config_.days = DayConvention::kUtc;
        config_.fill_missing = false;
        std::filesystem::create_directories(config_.data.dir);
    }

    void market(Period p, double y, double da, double ss) {
        production_.push_back({p, y, 0.0, y, std::nullopt});
        prices_.push_back({p, da, ss});
    }

    void submit(const std::string& team, Period p, const QuantileValues& q, double bid) {
        submissions_.push_back({team, market_day_of(p, config_.days), p, q, bid});
    }

    void team(const std::string& name, bool report = true, bool organiser = false) {
        teams_.push_back({name, report, false, organiser});
    }

    RunConfig& config() { return config_; }

    int run(const std::string& command) {
        write();
        std::ostringstream log;
        const int status = run_command(command, config_, log);
        log_ = log.str();
        return status;
    }

    CsvTable table(const std::string& name) const { return read_csv_file(config_.out_dir / (name + ".csv")); }

    std::map<std::string, std::vector<std::string>> by_team(const std::string& name) const {
        const auto t = table(name);
        std::map<std::string, std::vector<std::string>> out;
        for (const auto& row : t.rows) {
            out[row[0]] = row;
        }
        return out;
    }

    std::string column(const std::string& name, const std::string& team, const std::string& col) const {
        const auto t = table(name);
        const auto index = *t.find_column(col);
        for (const auto& row : t.rows) {
            if (row[0] == team) {
                return row[index];
            }
        }
        return {};
    }

    const std::string& log() const { return log_; }

private:
    void write() {
        SyntheticCompetition s{production_, prices_, submissions_, teams_};
        write_synthetic(s, config_.data.dir);
    }

    testing::TempDir tmp_;
    RunConfig config_;
    std::vector<CanonicalProductionRow> production_;
    std::vector<MarketPrices> prices_;
    std::vector<SubmissionRow> submissions_;
    std::vector<TeamMetadata> teams_;
    std::string log_;
};

std::vector<Period> periods(Date from, Date to) {
    std::vector<Period> out;
    for (const Date d : market_days(from, to)) {
        const auto p = market_day_periods(d, DayConvention::kUtc);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

TEST(ScoreCommand, PerfectForecastScoresZero) {
    Fixture fx(day("2024-02-20"), day("2024-02-21"));
    fx.team("Oracle");
    for (const Period p : periods(day("2024-02-20"), day("2024-02-21"))) {
        const double y = 100 + slot_of_day(p);
        fx.market(p, y, 50, 55);
        fx.submit("Oracle", p, testing::flat(y), y);
    }
    ASSERT_EQ(fx.run("score"), 0) << fx.log();
    EXPECT_EQ(fx.column("pinball", "Oracle", "pinball_mwh"), "0");
    EXPECT_EQ(fx.column("pinball", "Oracle", "periods"), "96");
    for (const auto& row : fx.table("expanding_pinball").rows) {
        EXPECT_EQ(row[2], "0");
    }
}

TEST(ScoreCommand, TwoTeamsWithHandComputedScores) {
    // flat forecasts 20 and 40 below the actual: 0.5 * 20 = 10 and 0.5 * 40 = 20 at every period
    Fixture fx(day("2024-02-20"), day("2024-02-20"));
    fx.team("Near");
    fx.team("Far");
    for (const Period p : periods(day("2024-02-20"), day("2024-02-20"))) {
        fx.market(p, 300, 50, 55);
        fx.submit("Near", p, testing::flat(280), 280);
        fx.submit("Far", p, testing::flat(260), 260);
    }
    ASSERT_EQ(fx.run("score"), 0) << fx.log();
    EXPECT_EQ(parse_number(fx.column("pinball", "Near", "pinball_mwh")), 10.0);
    EXPECT_EQ(parse_number(fx.column("pinball", "Far", "pinball_mwh")), 20.0);
    EXPECT_EQ(parse_number(fx.column("pinball", "Far", "daytime_mwh")), 20.0);
}

TEST(TradeCommand, SinglePeriodRevenue) {
    Fixture fx(day("2024-02-20"), day("2024-02-20"));
    fx.team("Solo");
    const Period p = testing::at("2024-02-20T12:00Z");
    fx.market(p, 100, 50, 60);
    fx.submit("Solo", p, testing::flat(90), 90);
    ASSERT_EQ(fx.run("trade"), 0) << fx.log();
    EXPECT_NEAR(parse_number(fx.column("revenue_totals", "Solo", "revenue_gbp")), 5093.0, 1e-9);
    const auto series = fx.table("revenue_series");
    ASSERT_EQ(series.rows.size(), 1u);
    EXPECT_NEAR(parse_number(series.rows[0][2]), 5093.0, 1e-9);
}

TEST(TradeCommand, OptimalBidderCapturesEverything) {
    Fixture fx(day("2024-02-20"), day("2024-02-21"));
    fx.team("Hindsight");
    for (const Period p : periods(day("2024-02-20"), day("2024-02-21"))) {
        const int s = slot_of_day(p);
        const MarketPrices prices{p, 50.0 + s, 40.0 + 1.5 * s};
        const double y = 400 + 3 * s;
        fx.market(p, y, prices.da_price, prices.ss_price);
        fx.submit("Hindsight", p, testing::flat(y), optimal_bid(y, prices));
    }
    ASSERT_EQ(fx.run("trade"), 0) << fx.log();
    const auto capture = fx.table("capture_ratio");
    EXPECT_EQ(capture.rows.size(), 48u);
    for (const auto& row : capture.rows) {
        EXPECT_NEAR(parse_number(row[2]), 1.0, 1e-12);
    }
    const auto bounds = fx.table("bounds");
    EXPECT_NEAR(parse_number(bounds.rows[1][1]), parse_number(fx.column("revenue_totals", "Hindsight", "revenue_gbp")),
                1e-6);
}

TEST(LeaderboardCommand, SingleTeamRanksFirstEverywhere) {
    Fixture fx(day("2024-02-20"), day("2024-02-20"));
    fx.team("Solo");
    for (const Period p : periods(day("2024-02-20"), day("2024-02-20"))) {
        fx.market(p, 100, 50, 60);
        fx.submit("Solo", p, testing::flat(90), 90);
    }
    ASSERT_EQ(fx.run("leaderboard"), 0) << fx.log();
    for (const char* col : {"forecast_rank", "trading_rank", "combined_rank"}) {
        EXPECT_EQ(fx.column("leaderboard", "Solo", col), "1") << col;
    }
}

TEST(LeaderboardCommand, SixMissedDaysMakeATeamIneligible) {
    const testing::TempDir tmp;
    write_synthetic(generate_synthetic(SyntheticOptions{}), tmp / "data");
    RunConfig c;
    c.data.dir = tmp / "data";
    c.out_dir = tmp / "out";
    c.window_start = SyntheticOptions{}.start;
    c.window_end = SyntheticOptions{}.end;
    std::ostringstream log;
    ASSERT_EQ(run_command("leaderboard", c, log), 0) << log.str();
    const auto rows = read_csv_file(c.out_dir / "leaderboard.csv");
    const auto eligible = *rows.find_column("eligible");
    const auto missed = *rows.find_column("missed");
    const auto rank = *rows.find_column("combined_rank");
    std::map<std::string, std::vector<std::string>> by_team;
    for (const auto& r : rows.rows) {
        by_team[r[0]] = r;
    }
    EXPECT_EQ(by_team.at("Delta")[missed], "6");
    EXPECT_EQ(by_team.at("Delta")[eligible], "FALSE");
    EXPECT_TRUE(by_team.at("Delta")[rank].empty());
    EXPECT_EQ(by_team.at("Bravo")[eligible], "TRUE");
    EXPECT_EQ(by_team.at("Echo")[eligible], "FALSE");
    EXPECT_EQ(by_team.at("Benchmark")[eligible], "FALSE");
}

/// Perfect forecasts of a flat 500 MWh and a spread that depends only on the
/// slot, so the trailing climatology equals the realised spread.
void known_spread_market(Fixture& fx, double spread_scale) {
    fx.team("Source");
    for (const Period p : periods(day("2024-01-15"), day("2024-03-05"))) {
        const int s = slot_of_day(p);
        const double spread = spread_scale * std::sin(s / 7.0);
        fx.market(p, 500, 60, 60 + spread);
        fx.submit("Source", p, testing::flat(500), 500);
    }
    fx.config().strategy_source = "Source";
    fx.config().min_training_rows = 48;
}

std::map<std::string, double> uplifts(Fixture& fx) {
    std::map<std::string, double> out;
    const auto t = fx.table("strategy_comparison");
    const auto uplift = *t.find_column("uplift_vs_median_gbp");
    for (const auto& r : t.rows) {
        out[r[0]] = parse_number(r[uplift]);
    }
    return out;
}

TEST(StrategyBacktest, ZeroSpreadMarketTiesTheBaseline) {
    Fixture fx(day("2024-02-01"), day("2024-03-05"));
    known_spread_market(fx, 0.0);
    ASSERT_EQ(fx.run("strategy-backtest"), 0) << fx.log();
    const auto u = uplifts(fx);
    ASSERT_EQ(u.size(), 3u);
    for (const auto& [name, value] : u) {
        EXPECT_NEAR(value, 0.0, 1e-6) << name;
    }
}

TEST(StrategyBacktest, KnownSpreadUpliftMatchesClosedForm) {
    Fixture fx(day("2024-02-01"), day("2024-03-05"));
    known_spread_market(fx, 20.0);
    ASSERT_EQ(fx.run("strategy-backtest"), 0) << fx.log();
    // perfect forecasts leave no baseline imbalance cost, so each period adds spread^2 / 4k;
    // the learned bidder keeps the median until enough realised rows exist, then is exact
    const auto t = fx.table("strategy_comparison");
    const auto fallback_column = *t.find_column("fallback_periods");
    std::size_t learned_fallbacks = 0;
    for (const auto& r : t.rows) {
        if (r[0] == "learned") {
            learned_fallbacks = static_cast<std::size_t>(parse_number(r[fallback_column]));
        }
    }
    const auto window = periods(day("2024-02-01"), day("2024-03-05"));
    ASSERT_GT(learned_fallbacks, 0u);
    ASSERT_LT(learned_fallbacks, window.size());
    double expected = 0;
    double expected_learned = 0;
    for (std::size_t i = 0; i < window.size(); ++i) {
        const double spread = 20.0 * std::sin(slot_of_day(window[i]) / 7.0);
        expected += spread * spread / (4 * 0.07);
        expected_learned += i < learned_fallbacks ? 0.0 : spread * spread / (4 * 0.07);
    }
    const auto u = uplifts(fx);
    EXPECT_NEAR(u.at("expected_optimal"), expected, 1e-6 * expected);
    EXPECT_NEAR(u.at("learned"), expected_learned, 1e-6 * expected);
}

TEST(Commands, DeclaredOutputsCarryUnitsAndConfigHash) {
    Fixture fx(day("2024-02-20"), day("2024-02-20"));
    fx.team("Solo");
    for (const Period p : periods(day("2024-02-20"), day("2024-02-20"))) {
        fx.market(p, 100, 50, 60);
        fx.submit("Solo", p, testing::flat(90), 90);
    }
    for (const char* command : {"score", "trade", "leaderboard", "validate-data"}) {
        ASSERT_EQ(fx.run(command), 0) << command << fx.log();
    }
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(fx.config().out_dir)) {
        std::ifstream in(entry.path());
        std::string first;
        std::getline(in, first);
        EXPECT_NE(first.find("config=" + fx.config().hash()), std::string::npos) << entry.path();
        if (entry.path().extension() == ".csv") {
            EXPECT_NE(first.find("units:"), std::string::npos) << entry.path();
        }
        ++files;
    }
    EXPECT_GE(files, 18u);
}

TEST(Commands, FailuresReturnNonZero) {
    Fixture fx(day("2024-02-20"), day("2024-02-20"));
    fx.team("Solo");
    const Period p = testing::at("2024-02-20T12:00Z");
    fx.market(p, 100, 50, 60);
    fx.submit("Solo", p, testing::flat(90), 90);
    EXPECT_EQ(fx.run("plot"), 2);
    fx.config().teams = {"Ghost"};
    EXPECT_EQ(fx.run("score"), 1);
    EXPECT_NE(fx.log().find("error:"), std::string::npos);
    fx.config().teams.clear();
    fx.config().data.prices = "absent.csv";
    EXPECT_EQ(fx.run("score"), 1);
}

TEST(LoadCompetition, BenchmarkFillsMissedDays) {
    Fixture fx(day("2024-02-20"), day("2024-02-22"));
    fx.config().fill_missing = true;
    fx.team("Benchmark", true, true);
    fx.team("Late");
    for (const Period p : periods(day("2024-02-20"), day("2024-02-22"))) {
        fx.market(p, 100, 50, 60);
        fx.submit("Benchmark", p, testing::flat(70), 70);
        if (p >= testing::at("2024-02-21T00:00Z")) {
            fx.submit("Late", p, testing::flat(95), 95);
        }
    }
    ASSERT_EQ(fx.run("score"), 0) << fx.log();
    EXPECT_EQ(fx.column("pinball", "Late", "filled_periods"), "48");
    // 48 periods at 0.5 * 30 = 15 and 96 at 0.5 * 5 = 2.5
    EXPECT_NEAR(parse_number(fx.column("pinball", "Late", "pinball_mwh")), (48 * 15.0 + 96 * 2.5) / 144, 1e-12);
}

}  // namespace
}  // namespace heftcom
