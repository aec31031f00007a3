#include "heftcom/app.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "heftcom/analytics.hpp"
#include "heftcom/csv.hpp"
#include "heftcom/error.hpp"
#include "heftcom/scoring.hpp"
#include "heftcom/strategy.hpp"

namespace heftcom {

namespace {

std::string na(const std::optional<double>& v) {
    return v ? format_number(*v) : "NA";
}

std::string na(const std::optional<int>& v) {
    return v ? std::to_string(*v) : "";
}

std::string flag(bool v) {
    return v ? "TRUE" : "FALSE";
}

bool parse_flag(const std::string& text, const std::string& context) {
    std::string lower;
    std::transform(text.begin(), text.end(), std::back_inserter(lower), [](unsigned char c) { return std::tolower(c); });
    if (lower == "true" || lower == "1" || lower == "yes") {
        return true;
    }
    if (lower == "false" || lower == "0" || lower == "no" || lower.empty()) {
        return false;
    }
    throw LoadError(context + ": expected TRUE or FALSE, got '" + text + "'");
}

/// Opens tables under the output directory and remembers what was declared.
class OutputDir {
public:
    explicit OutputDir(const Competition& competition)
        : root_(competition.config.out_dir), hash_(competition.config.hash()) {
        std::filesystem::create_directories(root_);
    }

    /// `units` describes the columns; the config hash is appended.
    CsvWriter& table(const std::string& name, std::vector<std::string> header, const std::string& units) {
        const auto path = root_ / (name + ".csv");
        declared_.push_back(path);
        streams_.push_back(std::make_unique<std::ofstream>(path, std::ios::binary));
        if (!*streams_.back()) {
            throw Error("cannot write " + path.string());
        }
        writers_.push_back(std::make_unique<CsvWriter>(*streams_.back(), std::move(header),
                                                       "table=" + name + " units: " + units + " config=" + hash_));
        return *writers_.back();
    }

    std::ofstream& text(const std::string& file) {
        const auto path = root_ / file;
        declared_.push_back(path);
        streams_.push_back(std::make_unique<std::ofstream>(path, std::ios::binary));
        if (!*streams_.back()) {
            throw Error("cannot write " + path.string());
        }
        *streams_.back() << "# config=" << hash_ << '\n';
        return *streams_.back();
    }

    std::vector<std::filesystem::path> close() {
        writers_.clear();
        for (auto& s : streams_) {
            s->close();
            if (s->fail()) {
                throw Error("write failed under " + root_.string());
            }
        }
        streams_.clear();
        return declared_;
    }

private:
    std::filesystem::path root_;
    std::string hash_;
    std::vector<std::unique_ptr<std::ofstream>> streams_;
    std::vector<std::unique_ptr<CsvWriter>> writers_;
    std::vector<std::filesystem::path> declared_;
};

SchemaMapping mapping_for(const std::optional<std::filesystem::path>& path, const DataPaths& data, SeriesKind kind) {
    if (!path) {
        return SchemaMapping::canonical(kind);
    }
    SchemaMapping m = SchemaMapping::from_file(data.resolve(*path));
    if (m.kind != kind) {
        throw ConfigError("mapping " + path->string() + " is for " + std::string(to_string(m.kind)) + ", expected " +
                          std::string(to_string(kind)));
    }
    return m;
}

std::vector<Period> keys_of(const auto& map) {
    std::vector<Period> out;
    out.reserve(map.size());
    for (const auto& [period, value] : map) {
        out.push_back(period);
    }
    return out;
}

MarketImpactCoefficient coefficient(const Competition& c) {
    return MarketImpactCoefficient{c.config.k};
}

std::vector<QuantileForecast> scored_forecasts(const TeamSeries& series, const RunConfig& config,
                                               std::size_t* sanitized) {
    std::vector<QuantileForecast> out;
    out.reserve(series.periods.size());
    const bool sanitize = config.sanitize_team && *config.sanitize_team == series.team;
    for (const auto& p : series.periods) {
        if (sanitize && std::any_of(p.q.begin(), p.q.end(), [&](double v) { return std::abs(v) > config.sanity_limit; })) {
            ++*sanitized;
            continue;
        }
        out.push_back(p.forecast());
    }
    return out;
}

/// Leaderboard with the configured rules; used by several commands.
std::vector<LeaderboardRow> leaderboard_of(const Competition& c) {
    ScoringOptions scoring;
    scoring.sanitize_team = c.config.sanitize_team;
    scoring.sanity_limit = c.config.sanity_limit;
    return build_leaderboard(c.teams, c.market, coefficient(c), c.config.rules, scoring);
}

const TeamRecord& team_named(const Competition& c, const std::string& name) {
    for (const auto& t : c.teams) {
        if (t.name == name) {
            return t;
        }
    }
    throw ConfigError("team '" + name + "' is not in the data");
}

std::vector<std::string> stats_fields(const TradeStats& s) {
    return {std::to_string(s.periods), format_number(s.win_rate), format_number(s.relative_bid_volume),
            na(s.trade_vwap),          na(s.production_vwap),      na(s.sharpe),
            na(s.sortino),             format_number(s.var),       format_number(s.es)};
}

const std::vector<std::string> kStatsHeader{"periods", "win_rate", "relative_bid_volume", "trade_vwap_gbp_per_mwh",
                                            "production_vwap_gbp_per_mwh", "sharpe", "sortino", "var_gbp", "es_gbp"};

void write_inclusion_mask(OutputDir& out, const Competition& c) {
    auto& t = out.table("inclusion_mask", {"period_start_utc", "market_day", "included", "reasons"},
                        "one row per window period; reasons separated by ';'");
    for (const Period p : c.window_periods) {
        const auto it = c.alignment.excluded.find(p);
        std::string reasons;
        if (it != c.alignment.excluded.end()) {
            for (const auto& r : it->second) {
                reasons += (reasons.empty() ? "" : ";") + r;
            }
        }
        t.row({format_period(p), format_date(market_day_of(p, c.config.days)), flag(it == c.alignment.excluded.end()),
               reasons});
    }
}

}  // namespace

std::map<std::string, TeamMetadata> load_team_metadata(const std::filesystem::path& path) {
    const CsvTable table = read_csv_file(path);
    std::map<std::string, TeamMetadata> out;
    if (table.header.empty()) {
        return out;
    }
    const auto column = [&](const char* name) {
        const auto index = table.find_column(name);
        if (!index) {
            throw LoadError(path.string() + ": missing column '" + name + "'");
        }
        return *index;
    };
    const std::size_t team = column("team");
    const std::size_t report = column("report");
    const std::size_t student = column("student");
    const std::size_t organiser = column("organiser");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::string context = path.string() + " line " + std::to_string(table.line_numbers[i]);
        TeamMetadata m{row[team], parse_flag(row[report], context), parse_flag(row[student], context),
                       parse_flag(row[organiser], context)};
        if (!out.emplace(m.team, m).second) {
            throw LoadError(context + ": duplicate team '" + m.team + "'");
        }
    }
    return out;
}

Competition load_competition(const RunConfig& config) {
    config.validate();
    Competition c;
    c.config = config;
    const DataPaths& data = config.data;

    auto production = load_production(data.resolve(data.production),
                                      mapping_for(data.production_mapping, data, SeriesKind::kProduction));
    auto prices = load_prices(data.resolve(data.prices), mapping_for(data.prices_mapping, data, SeriesKind::kPrices));
    auto submissions =
        load_submissions(data.resolve(data.submissions),
                         mapping_for(data.submissions_mapping, data, SeriesKind::kSubmissions), config.days, config.bounds);
    c.reports = {{"production", production.report}, {"prices", prices.report}, {"submissions", submissions.report}};
    const auto metadata = load_team_metadata(data.resolve(data.teams));

    c.days = market_days(config.window_start, config.window_end);
    for (const Date d : c.days) {
        const auto periods = market_day_periods(d, config.days);
        c.window_periods.insert(c.window_periods.end(), periods.begin(), periods.end());
    }

    c.history = make_market(production.rows, prices.rows);
    const MarketData& raw = c.history;
    auto grouped = group_submissions(submissions.rows);
    std::set<Period> submitted;
    for (const auto& row : submissions.rows) {
        submitted.insert(row.period);
    }
    const std::vector<AlignmentInput> inputs{{"missing price", keys_of(raw.prices)},
                                             {"missing actual", keys_of(raw.production)},
                                             {"missing submission", {submitted.begin(), submitted.end()}}};
    c.alignment = align(inputs, c.window_periods);
    for (const Period p : c.alignment.included) {
        c.market.prices.emplace(p, raw.prices.at(p));
        c.market.production.emplace(p, raw.production.at(p));
    }

    TeamSeries benchmark;
    if (const auto it = grouped.find(config.benchmark_team); it != grouped.end()) {
        benchmark = it->second;
    }
    const std::set<std::string> wanted(config.teams.begin(), config.teams.end());
    for (const auto& name : wanted) {
        if (grouped.count(name) == 0) {
            throw ConfigError("requested team '" + name + "' has no submissions");
        }
    }
    for (auto& [name, series] : grouped) {
        if (!wanted.empty() && wanted.count(name) == 0) {
            continue;
        }
        const auto meta = metadata.find(name);
        if (meta == metadata.end()) {
            throw DataError("team '" + name + "' has no row in " + data.teams.string());
        }
        TeamRecord record;
        record.name = name;
        record.report_submitted = meta->second.report;
        record.student = meta->second.student;
        record.organiser = meta->second.organiser;
        if (config.fill_missing) {
            FillResult fill = fill_missing(series, benchmark, c.days, config.days);
            record.series = std::move(fill.series);
            record.missed_submissions = static_cast<int>(fill.missed_days.size());
            c.partial_fills[name] = fill.partial_periods;
        } else {
            const std::set<Date> window_days(c.days.begin(), c.days.end());
            std::set<Date> seen;
            record.series.team = name;
            for (const auto& p : series.periods) {
                if (window_days.count(p.market_day) != 0 &&
                    std::binary_search(c.window_periods.begin(), c.window_periods.end(), p.period)) {
                    record.series.periods.push_back(p);
                    seen.insert(p.market_day);
                }
            }
            record.missed_submissions = static_cast<int>(c.days.size() - seen.size());
        }
        c.teams.push_back(std::move(record));
    }
    for (const auto& [name, meta] : metadata) {
        if (grouped.count(name) == 0) {
            c.warnings.push_back("team '" + name + "' has metadata but no submissions");
        }
    }
    if (c.teams.empty()) {
        throw DataError("no teams to evaluate");
    }
    return c;
}

std::vector<std::filesystem::path> cmd_score(const Competition& c) {
    OutputDir out(c);
    auto& pinball = out.table("pinball",
                              {"team", "periods", "pinball_mwh", "daytime_mwh", "overnight_mwh", "missing_actuals",
                               "sanitized_periods", "filled_periods"},
                              "pinball in MWh, daytime is 08:00-20:00 UTC");
    auto& reliability = out.table("reliability", {"team", "window", "level", "periods", "coverage"},
                                  "coverage is the fraction of periods with actual <= quantile");
    auto& expanding = out.table("expanding_pinball", {"team", "period_start_utc", "expanding_pinball_mwh"},
                                "running mean pinball in MWh");
    for (const auto& team : c.teams) {
        std::size_t sanitized = 0;
        const auto forecasts = scored_forecasts(team.series, c.config, &sanitized);
        const PinballResult result = score_series(forecasts, c.market.production);
        pinball.row({team.name, std::to_string(result.per_period.size()), format_number(result.overall),
                     na(result.daytime), na(result.overnight), std::to_string(result.missing_actuals),
                     std::to_string(sanitized), std::to_string(team.series.filled_count())});
        for (const auto window : {TimeWindow::kAll, TimeWindow::kDaytime, TimeWindow::kOvernight}) {
            const char* name = window == TimeWindow::kAll ? "all" : window == TimeWindow::kDaytime ? "daytime" : "overnight";
            ReliabilityDiagram diagram;
            try {
                diagram = reliability_diagram(forecasts, c.market.production, window);
            } catch (const EmptyEvaluationError&) {
                continue;
            }
            for (std::size_t j = 0; j < kLevelCount; ++j) {
                reliability.row({team.name, name, format_number(kLevels[j]), std::to_string(diagram.count),
                                 format_number(diagram.coverage[j])});
            }
        }
        for (const auto& s : expanding_pinball(result.per_period)) {
            expanding.row({team.name, format_period(s.period), format_number(s.score)});
        }
    }
    write_inclusion_mask(out, c);
    return out.close();
}

std::vector<std::filesystem::path> cmd_trade(const Competition& c) {
    const auto& a = c.config.analytics;
    const auto k = coefficient(c);
    OutputDir out(c);
    auto& totals = out.table("revenue_totals", {"team", "periods", "revenue_gbp", "revenue_m"}, "revenue in GBP and GBP m");
    auto& series = out.table("revenue_series", {"team", "period_start_utc", "revenue_gbp"}, "revenue per period in GBP");
    std::vector<std::string> stats_header{"team"};
    stats_header.insert(stats_header.end(), kStatsHeader.begin(), kStatsHeader.end());
    auto& stats = out.table("trade_stats", stats_header,
                            "per-period revenue statistics; VaR and ES at level " + format_number(a.var_level));
    auto& cost = out.table("opportunity_cost", {"team", "period_start_utc", "pinball_mwh", "cost_gbp_per_mwh"},
                           "(max revenue - revenue) / bid in GBP/MWh; zero-bid periods omitted");
    auto& cost_binned = out.table("opportunity_cost_binned",
                                  {"team", "pinball_low_mwh", "pinball_high_mwh", "periods", "median_cost_gbp_per_mwh"},
                                  "median opportunity cost per pinball bin");
    auto& capture = out.table("capture_ratio", {"team", "slot", "median_capture_ratio"},
                              "revenue / max revenue by UTC half-hour slot 0-47");
    auto& histogram = out.table("bid_histogram", {"team", "bin", "center_mwh", "periods"},
                                "counts of q50 - bid in MWh; bin is below, bin or above the range");
    auto& risk = out.table("risk_reward", {"team", "var_gbp", "production_vwap_gbp_per_mwh"},
                           "first " + std::to_string(a.warmup_days) + " market days excluded");
    auto& direction = out.table("direction_stats",
                                {"team", "correct_bid_direction", "bid_decidable", "imbalance_opposite_spread",
                                 "imbalance_decidable"},
                                "fractions over periods with nonzero spread and deviation");

    const Period warm_start = c.days.size() > static_cast<std::size_t>(a.warmup_days)
                                  ? market_day_periods(c.days[static_cast<std::size_t>(a.warmup_days)], c.config.days).front()
                                  : Period::max();
    std::map<std::string, std::vector<TradeRecord>> ledgers;
    for (const auto& team : c.teams) {
        const TradeLedger ledger = settle_team(team.series, c.market, k);
        totals.row({team.name, std::to_string(ledger.records.size()), format_number(ledger.total_revenue),
                    format_number(ledger.total_revenue / 1e6)});
        for (const auto& r : ledger.records) {
            series.row({team.name, format_period(r.period), format_number(r.revenue)});
        }
        if (ledger.records.empty()) {
            continue;
        }
        std::vector<std::string> row{team.name};
        const auto fields = stats_fields(trade_stats(ledger.records, a.var_level));
        row.insert(row.end(), fields.begin(), fields.end());
        stats.row(row);

        const auto costs = opportunity_cost(ledger.records);
        for (const auto& oc : costs) {
            cost.row({team.name, format_period(oc.period), format_number(oc.pinball), format_number(oc.cost)});
        }
        for (const auto& b : bin_opportunity_cost(costs, a.cost_bin_width)) {
            cost_binned.row({team.name, format_number(b.low), format_number(b.high), std::to_string(b.count),
                             format_number(b.median)});
        }
        for (const auto& [slot, ratio] : capture_ratio(ledger.records)) {
            capture.row({team.name, std::to_string(slot), format_number(ratio)});
        }
        const Histogram h = strategic_bid_histogram(ledger.records, a.histogram_width, a.histogram_min, a.histogram_max);
        histogram.row({team.name, "below", "", std::to_string(h.underflow)});
        for (std::size_t i = 0; i < h.centers.size(); ++i) {
            histogram.row({team.name, "bin", format_number(h.centers[i]), std::to_string(h.counts[i])});
        }
        histogram.row({team.name, "above", "", std::to_string(h.overflow)});

        std::vector<TradeRecord> late;
        std::copy_if(ledger.records.begin(), ledger.records.end(), std::back_inserter(late),
                     [&](const TradeRecord& r) { return r.period >= warm_start; });
        if (!late.empty()) {
            const TradeStats s = trade_stats(late, a.var_level);
            risk.row({team.name, format_number(s.var), na(s.production_vwap)});
        }
        const DirectionStats d = direction_stats(ledger.records);
        direction.row({team.name, na(d.correct_bid_direction), std::to_string(d.bid_decidable),
                       na(d.imbalance_opposite_spread), std::to_string(d.imbalance_decidable)});
        ledgers.emplace(team.name, ledger.records);
    }

    // cumulative revenue by market day relative to the mean of the top trading teams
    const auto rows = leaderboard_of(c);
    std::vector<const LeaderboardRow*> ranked;
    for (const auto& r : rows) {
        if (r.trading_rank && *r.trading_rank <= a.top_n) {
            ranked.push_back(&r);
        }
    }
    std::sort(ranked.begin(), ranked.end(), [](auto* x, auto* y) { return *x->trading_rank < *y->trading_rank; });
    auto& rolling = out.table("rolling_revenue",
                              {"team", "trading_rank", "market_day", "cumulative_revenue_gbp", "relative_to_top_mean_gbp"},
                              "cumulative revenue in GBP; top-" + std::to_string(a.top_n) + " trading teams");
    if (!ranked.empty()) {
        std::vector<std::vector<double>> cumulative;
        for (const auto* r : ranked) {
            std::map<Date, double> daily;
            for (const auto& rec : ledgers.at(r->team)) {
                daily[market_day_of(rec.period, c.config.days)] += rec.revenue;
            }
            std::vector<double> running;
            double total = 0.0;
            for (const Date d : c.days) {
                total += daily.count(d) != 0 ? daily.at(d) : 0.0;
                running.push_back(total);
            }
            cumulative.push_back(std::move(running));
        }
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            for (std::size_t d = 0; d < c.days.size(); ++d) {
                double mean = 0.0;
                for (const auto& cum : cumulative) {
                    mean += cum[d];
                }
                mean /= static_cast<double>(cumulative.size());
                rolling.row({ranked[i]->team, std::to_string(*ranked[i]->trading_rank), format_date(c.days[d]),
                             format_number(cumulative[i][d]), format_number(cumulative[i][d] - mean)});
            }
        }
    }

    auto& bounds = out.table("bounds", {"bound", "revenue_gbp", "revenue_m"},
                             "perfect_forecast bids actual production; perfect_decisions bids the optimum each period");
    double perfect_forecast = 0.0;
    double perfect_decisions = 0.0;
    for (const auto& [period, prices] : c.market.prices) {
        const double y = c.market.production.at(period);
        perfect_forecast += settle_revenue(prices, {period, y, y}, k);
        perfect_decisions += max_revenue(y, prices, k);
    }
    bounds.row({"perfect_forecast", format_number(perfect_forecast), format_number(perfect_forecast / 1e6)});
    bounds.row({"perfect_decisions", format_number(perfect_decisions), format_number(perfect_decisions / 1e6)});
    return out.close();
}

std::vector<std::filesystem::path> cmd_leaderboard(const Competition& c) {
    OutputDir out(c);
    const auto rows = leaderboard_of(c);
    auto& table = out.table("leaderboard",
                            {"team", "pinball_mwh", "revenue_m", "forecast_rank", "trading_rank", "combined_rank",
                             "report", "missed", "student", "eligible", "pinball_tie", "revenue_tie", "scored_periods",
                             "sanitized_periods", "pinball_full_mwh", "revenue_full_m"},
                            "pinball in MWh, revenue in GBP m, shown to 2 dp with full precision in the last columns; "
                            "ranks blank when ineligible");
    std::vector<SkillPoint> points;
    for (const auto& r : rows) {
        table.row({r.team, format_fixed(r.pinball, 2), format_fixed(r.revenue_m, 2), na(r.forecast_rank),
                   na(r.trading_rank), na(r.combined_rank), flag(r.report), std::to_string(r.missed), flag(r.student),
                   flag(r.eligible), flag(r.pinball_tie), flag(r.revenue_tie), std::to_string(r.scored_periods),
                   std::to_string(r.sanitized_periods), format_number(r.pinball), format_number(r.revenue_m)});
        points.push_back({r.team, r.pinball, r.revenue_m});
    }

    auto& skill = out.table("skill_value",
                            {"slope_m_per_mwh", "intercept_m", "ci_low", "ci_high", "p_value", "teams", "excluded",
                             "status"},
                            "OLS of revenue (GBP m) on pinball (MWh) below " +
                                format_number(c.config.analytics.skill_threshold) + " MWh; 95% interval");
    try {
        const SkillValueFit fit =
            skill_value_regression(points, c.config.analytics.skill_threshold, c.config.analytics.skill_exclusions);
        std::string excluded;
        for (const auto& e : fit.excluded) {
            excluded += (excluded.empty() ? "" : ";") + e;
        }
        skill.row({format_number(fit.slope), format_number(fit.intercept), format_number(fit.ci_low),
                   format_number(fit.ci_high), format_number(fit.p_value), std::to_string(fit.n), excluded, "ok"});
    } catch (const FitError& e) {
        skill.row({"NA", "NA", "NA", "NA", "NA", "0", "", e.what()});
    }
    return out.close();
}

std::vector<std::filesystem::path> cmd_strategy_backtest(const Competition& c) {
    std::string source_name;
    if (c.config.strategy_source) {
        source_name = *c.config.strategy_source;
    } else {
        const auto rows = leaderboard_of(c);
        const auto best = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.forecast_rank == 1; });
        source_name = best != rows.end() ? best->team : rows.front().team;
    }
    const TeamRecord& source = team_named(c, source_name);

    std::vector<StrategyKind> kinds{StrategyKind::kMedian};
    for (const auto kind : c.config.strategies) {
        if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
            kinds.push_back(kind);
        }
    }
    InformationPolicy policy;
    policy.days = c.config.days;

    OutputDir out(c);
    std::vector<std::string> header{"strategy", "source_team", "revenue_gbp", "revenue_m", "uplift_vs_median_gbp",
                                    "fallback_periods"};
    header.insert(header.end(), kStatsHeader.begin(), kStatsHeader.end());
    auto& comparison = out.table("strategy_comparison", header,
                                 "revenue in GBP; uplift relative to bidding the source team's median");
    auto& bids = out.table("strategy_bids", {"strategy", "period_start_utc", "bid_mwh"}, "bids in MWh");

    double baseline = 0.0;
    for (const auto kind : kinds) {
        StrategyConfig sc;
        sc.kind = kind;
        sc.k = coefficient(c);
        sc.bounds = c.config.bounds;
        sc.climatology_window_days = c.config.climatology_days;
        sc.expectation = c.config.expectation;
        sc.min_training_rows = c.config.min_training_rows;
        std::size_t fallbacks = 0;
        const TeamSeries run = run_strategy(sc, source.series, c.history, policy, c.days, &fallbacks);
        const TradeLedger ledger = settle_team(run, c.market, sc.k);
        if (kind == StrategyKind::kMedian) {
            baseline = ledger.total_revenue;
        }
        std::vector<std::string> row{std::string(to_string(kind)), source_name, format_number(ledger.total_revenue),
                                     format_number(ledger.total_revenue / 1e6),
                                     format_number(ledger.total_revenue - baseline), std::to_string(fallbacks)};
        const auto fields = ledger.records.empty() ? std::vector<std::string>(kStatsHeader.size(), "NA")
                                                   : stats_fields(trade_stats(ledger.records, c.config.analytics.var_level));
        row.insert(row.end(), fields.begin(), fields.end());
        comparison.row(row);
        for (const auto& p : run.periods) {
            bids.row({std::string(to_string(kind)), format_period(p.period), format_number(p.bid)});
        }
    }
    return out.close();
}

std::vector<std::filesystem::path> cmd_validate_data(const Competition& c) {
    OutputDir out(c);
    auto& report = out.text("validation_report.txt");
    for (const auto& [name, r] : c.reports) {
        report << "[" << name << "]\n" << r.to_text();
    }
    report << "[window]\n"
           << format_date(c.config.window_start) << " to " << format_date(c.config.window_end) << ", " << c.days.size()
           << " market days, " << c.window_periods.size() << " periods, " << c.alignment.included.size()
           << " included, " << c.alignment.excluded.size() << " excluded\n";
    report << "[teams]\n";
    for (const auto& t : c.teams) {
        const auto partial = c.partial_fills.find(t.name);
        report << t.name << ": " << t.series.periods.size() << " periods, " << t.missed_submissions << " missed days, "
               << (partial != c.partial_fills.end() ? partial->second : 0) << " single periods filled\n";
    }
    for (const auto& w : c.warnings) {
        report << "warning " << w << '\n';
    }
    write_inclusion_mask(out, c);
    return out.close();
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& log) {
    using Command = std::vector<std::filesystem::path> (*)(const Competition&);
    static const std::map<std::string, Command> commands{{"score", cmd_score},
                                                         {"trade", cmd_trade},
                                                         {"leaderboard", cmd_leaderboard},
                                                         {"strategy-backtest", cmd_strategy_backtest},
                                                         {"validate-data", cmd_validate_data}};
    const auto it = commands.find(command);
    if (it == commands.end()) {
        log << "error: unknown command '" << command << "'\n";
        return 2;
    }
    std::vector<std::filesystem::path> outputs;
    try {
        const Competition competition = load_competition(config);
        for (const auto& w : competition.warnings) {
            log << "warning: " << w << '\n';
        }
        outputs = it->second(competition);
    } catch (const std::exception& e) {
        log << "error: " << command << ": " << e.what() << '\n';
        return 1;
    }
    int status = 0;
    for (const auto& p : outputs) {
        if (!std::filesystem::exists(p)) {
            log << "error: declared output missing: " << p.string() << '\n';
            status = 1;
        }
    }
    return status;
}

}  // namespace heftcom
