#pragma once

// Trading and skill analytics over settled per-period trades.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heftcom/market.hpp"
#include "heftcom/series.hpp"

namespace heftcom {

/// One settled period of a team, joined with prices and production.
struct TradeRecord {
    Period period{};
    double median = 0.0;      // q50 forecast
    double bid = 0.0;
    double production = 0.0;
    MarketPrices prices;
    double revenue = 0.0;
    double max_revenue = 0.0;
    double pinball = 0.0;     // mean pinball of the period's forecast
};

struct TradeLedger {
    std::vector<TradeRecord> records;  // chronological
    std::size_t excluded = 0;          // team periods lacking price or production
    double total_revenue = 0.0;
};

/// Settles every team period that has both prices and production.
TradeLedger settle_team(const TeamSeries& team, const MarketData& market,
                        MarketImpactCoefficient k = MarketImpactCoefficient{});

struct PeriodValue {
    Period period{};
    double value = 0.0;
};

/// Per-period revenue (£); its sum is the trading-track score.
std::vector<PeriodValue> revenue_series(const TeamSeries& team, const MarketData& market,
                                        MarketImpactCoefficient k = MarketImpactCoefficient{});

struct OpportunityCost {
    Period period{};
    double pinball = 0.0;
    double cost = 0.0;  // (max revenue - revenue) / bid, £/MWh, >= 0
};

/// Periods with bid <= volume_epsilon are omitted.
std::vector<OpportunityCost> opportunity_cost(std::span<const TradeRecord> records, double volume_epsilon = 1e-9);

struct BinnedMedian {
    double low = 0.0;
    double high = 0.0;
    std::size_t count = 0;
    double median = 0.0;
};

/// Groups opportunity costs by pinball bins of fixed width and reports the
/// median cost per non-empty bin.
std::vector<BinnedMedian> bin_opportunity_cost(std::span<const OpportunityCost> costs, double bin_width);

/// Median of revenue / max revenue per UTC slot of day, over periods with
/// positive max revenue. Slots with no such period are absent.
std::map<int, double> capture_ratio(std::span<const TradeRecord> records);

struct TradeStats {
    std::size_t periods = 0;
    double win_rate = 0.0;
    double relative_bid_volume = 0.0;
    std::optional<double> trade_vwap;       // £/MWh
    std::optional<double> production_vwap;  // £/MWh
    std::optional<double> sharpe;           // absent when revenue has zero variance
    std::optional<double> sortino;          // absent without (enough) negative revenue
    double var = 0.0;                       // lower-tail revenue quantile, £
    double es = 0.0;                        // mean revenue below `var`, £
};

TradeStats trade_stats(std::span<const TradeRecord> records, double var_level = 0.05);

/// Risk summary of a bare revenue vector, as used by `trade_stats`.
struct RevenueRisk {
    double mean = 0.0;
    std::optional<double> sharpe;
    std::optional<double> sortino;
    double var = 0.0;
    double es = 0.0;
};

RevenueRisk revenue_risk(std::span<const double> revenues, double var_level = 0.05);

struct DirectionStats {
    std::optional<double> correct_bid_direction;      // sign(q50 - x) == sign(spread)
    std::optional<double> imbalance_opposite_spread;  // sign(x - y) == -sign(spread)
    std::size_t bid_decidable = 0;
    std::size_t imbalance_decidable = 0;
};

/// Periods with zero spread, or zero deviation for the statistic at hand,
/// are left out of that statistic's denominator.
DirectionStats direction_stats(std::span<const TradeRecord> records);

struct Histogram {
    double width = 25.0;
    double min = -500.0;
    double max = 500.0;
    std::vector<double> centers;
    std::vector<std::size_t> counts;
    std::size_t underflow = 0;
    std::size_t overflow = 0;
};

/// Histogram of q50 - x with bins of `width` centred on multiples of
/// `width`, covering [min, max].
Histogram strategic_bid_histogram(std::span<const TradeRecord> records, double width = 25.0, double min = -500.0,
                                  double max = 500.0);
Histogram histogram_of(std::span<const double> values, double width, double min, double max);

struct SkillPoint {
    std::string team;
    double pinball = 0.0;    // MWh
    double revenue_m = 0.0;  // £m
};

struct SkillValueFit {
    double slope = 0.0;      // £m per MWh
    double intercept = 0.0;  // £m
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_value = 0.0;
    std::size_t n = 0;
    std::vector<std::string> excluded;
};

/// OLS of revenue on pinball over teams with pinball < threshold, less the
/// named outliers, with a 95% Student-t interval for the slope.
SkillValueFit skill_value_regression(std::span<const SkillPoint> points, double pinball_threshold = 31.0,
                                     std::span<const std::string> outlier_exclusions = {});

}  // namespace heftcom
