#pragma once

// Bidding strategies over generation quantiles and price-spread information.

#include <array>
#include <chrono>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "heftcom/market.hpp"
#include "heftcom/quantiles.hpp"
#include "heftcom/series.hpp"

namespace heftcom {

struct SpreadEstimate {
    enum class Source { kClimatology, kExternal };

    Period period{};
    double mean_spread = 0.0;
    Source source = Source::kClimatology;
    std::size_t observations = 0;
};

enum class StrategyKind { kMedian, kExpectedOptimal, kLearned };

StrategyKind parse_strategy_kind(std::string_view text);
std::string_view to_string(StrategyKind kind);

/// Which point of the forecast distribution stands in for E[y].
enum class ExpectationRule { kInterpolatedMean, kMedian };

struct StrategyConfig {
    StrategyKind kind = StrategyKind::kMedian;
    MarketImpactCoefficient k;
    BidBounds bounds;
    int climatology_window_days = 28;
    ExpectationRule expectation = ExpectationRule::kInterpolatedMean;
    /// Learned bidder needs at least this many training rows before it is
    /// used; earlier days fall back to the median bid.
    std::size_t min_training_rows = 336;

    void validate() const;
};

/// What a bidder may know when bidding for a market day: the gate closes at
/// `deadline` UTC on the previous day and realised prices and production
/// arrive `realised_lag` after the fact.
struct InformationPolicy {
    DayConvention days = DayConvention::kLondon;
    std::chrono::minutes deadline{9 * 60 + 20};
    std::chrono::days realised_lag{7};

    Period cutoff(Date market_day) const;
    /// True when a period settled early enough to be known at the cutoff.
    bool realised_by(Period observed, Date market_day) const;
};

/// Mean spread pi_S - pi_D over the same UTC slot of day within
/// [target - window_days, target). Every history period must precede the
/// target and at least seven same-slot observations are required.
SpreadEstimate climatological_spread(std::span<const MarketPrices> history, Period target, int window_days);

/// Indexed version of `climatological_spread` for repeated queries that
/// additionally caps the history at the latest known period start.
class SpreadClimatology {
public:
    explicit SpreadClimatology(const PriceSeries& prices);

    SpreadEstimate estimate(Period target, int window_days, Period latest_known) const;

private:
    struct Slot {
        std::vector<Period> periods;
        std::vector<double> prefix;  // prefix[i] = sum of first i spreads
    };
    std::array<Slot, kSlotsPerDay> slots_;
};

inline constexpr std::size_t kMinimumClimatologyObservations = 7;

/// q50 clipped to the bid bounds.
double bid_median(const QuantileForecast& forecast, const StrategyConfig& config);

/// E[y] - spread / (2k) clipped to the bid bounds.
double bid_expected_optimal(const QuantileForecast& forecast, const SpreadEstimate& spread,
                            const StrategyConfig& config);

struct OptimalBidRow {
    Period period{};
    double median = 0.0;
    int slot = 0;
    double climatological_spread = 0.0;
    double target = 0.0;  // ex-post optimal bid

    std::array<double, 3> features() const { return {median, static_cast<double>(slot), climatological_spread}; }
};

struct OptimalBidDataset {
    std::vector<OptimalBidRow> rows;
    std::size_t candidates = 0;  // forecast periods considered
    std::size_t dropped = 0;     // missing production, price or climatology
};

/// Historical table of features known at submission time against the
/// ex-post optimal bid.
OptimalBidDataset build_optimal_bid_dataset(std::span<const QuantileForecast> forecasts, const MarketData& market,
                                            const InformationPolicy& policy, int window_days,
                                            MarketImpactCoefficient k = MarketImpactCoefficient{});

/// Ordinary least squares on (q50, slot, climatological spread).
class LinearBidRegressor {
public:
    void fit(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const double> targets);
    void fit(std::span<const OptimalBidRow> rows);

    double predict(std::span<const double> features) const;

    bool fitted() const { return fitted_; }
    double intercept() const { return intercept_; }
    const std::vector<double>& coefficients() const { return coefficients_; }

private:
    bool fitted_ = false;
    double intercept_ = 0.0;
    std::vector<double> coefficients_;
};

double bid_learned(const LinearBidRegressor& regressor, std::span<const double> features, const StrategyConfig& config);

struct StrategyBid {
    Period period{};
    double bid = 0.0;
    bool fallback = false;  // strategy lacked inputs; median bid used
};

/// Bids for one market day using the source team's forecasts for that day and
/// only market data realised before the day's information cutoff.
std::vector<StrategyBid> bid_market_day(const StrategyConfig& config, const TeamSeries& source, const MarketData& market,
                                        const InformationPolicy& policy, Date day);

/// Runs a strategy over a list of market days and returns the source team's
/// forecasts with the strategy's bids substituted.
TeamSeries run_strategy(const StrategyConfig& config, const TeamSeries& source, const MarketData& market,
                        const InformationPolicy& policy, std::span<const Date> days,
                        std::size_t* fallback_count = nullptr);

}  // namespace heftcom
