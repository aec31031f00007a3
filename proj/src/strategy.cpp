#include "heftcom/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heftcom/error.hpp"

namespace heftcom {

namespace {

double expected_production(const QuantileForecast& forecast, ExpectationRule rule) {
    if (rule == ExpectationRule::kMedian) {
        return forecast.median();
    }
    QuantileValues sorted = forecast.q;
    std::sort(sorted.begin(), sorted.end());
    return interpolated_mean(sorted);
}

Period latest_known_start(const InformationPolicy& policy, Date day) {
    return policy.cutoff(day) - kPeriodLength;
}

std::vector<const TeamPeriod*> periods_of_day(const TeamSeries& source, Date day) {
    std::vector<const TeamPeriod*> out;
    for (const auto& p : source.periods) {
        if (p.market_day == day) {
            out.push_back(&p);
        }
    }
    return out;
}

std::vector<StrategyBid> bid_day(const StrategyConfig& config, std::span<const TeamPeriod* const> day_periods,
                                 const SpreadClimatology& climatology, const LinearBidRegressor* regressor,
                                 Period latest_known) {
    std::vector<StrategyBid> bids;
    bids.reserve(day_periods.size());
    for (const TeamPeriod* p : day_periods) {
        const QuantileForecast forecast = p->forecast();
        StrategyBid bid{p->period, bid_median(forecast, config), false};
        if (config.kind == StrategyKind::kMedian) {
            bids.push_back(bid);
            continue;
        }
        const SpreadEstimate spread = climatology.estimate(p->period, config.climatology_window_days, latest_known);
        if (spread.observations < kMinimumClimatologyObservations) {
            bid.fallback = true;
        } else if (config.kind == StrategyKind::kExpectedOptimal) {
            bid.bid = bid_expected_optimal(forecast, spread, config);
        } else if (regressor == nullptr || !regressor->fitted()) {
            bid.fallback = true;
        } else {
            const std::array<double, 3> features{forecast.median(), static_cast<double>(slot_of_day(p->period)),
                                                 spread.mean_spread};
            bid.bid = bid_learned(*regressor, features, config);
        }
        bids.push_back(bid);
    }
    return bids;
}

std::optional<LinearBidRegressor> train_for_day(const StrategyConfig& config, const OptimalBidDataset& dataset,
                                                const InformationPolicy& policy, Date day) {
    std::vector<OptimalBidRow> training;
    for (const auto& row : dataset.rows) {
        if (policy.realised_by(row.period, day)) {
            training.push_back(row);
        }
    }
    if (training.size() < std::max<std::size_t>(config.min_training_rows, 4)) {
        return std::nullopt;
    }
    LinearBidRegressor regressor;
    regressor.fit(training);
    return regressor;
}

}  // namespace

StrategyKind parse_strategy_kind(std::string_view text) {
    if (text == "median") {
        return StrategyKind::kMedian;
    }
    if (text == "expected_optimal" || text == "expected-optimal") {
        return StrategyKind::kExpectedOptimal;
    }
    if (text == "learned") {
        return StrategyKind::kLearned;
    }
    throw InvalidInputError("unknown strategy '" + std::string(text) + "'");
}

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::kMedian:
            return "median";
        case StrategyKind::kExpectedOptimal:
            return "expected_optimal";
        case StrategyKind::kLearned:
            return "learned";
    }
    return "unknown";
}

void StrategyConfig::validate() const {
    if (!(bounds.floor <= bounds.cap)) {
        throw InvalidInputError("bid floor exceeds bid cap");
    }
    if (climatology_window_days < 1) {
        throw InvalidInputError("climatology window must be at least one day");
    }
}

Period InformationPolicy::cutoff(Date market_day) const {
    return submission_deadline(market_day, deadline) - realised_lag;
}

bool InformationPolicy::realised_by(Period observed, Date market_day) const {
    return observed + kPeriodLength <= cutoff(market_day);
}

SpreadEstimate climatological_spread(std::span<const MarketPrices> history, Period target, int window_days) {
    if (window_days < 1) {
        throw InvalidInputError("climatology window must be at least one day");
    }
    const Period window_start = target - std::chrono::days{window_days};
    const int slot = slot_of_day(target);
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& p : history) {
        if (p.period >= target) {
            throw PreconditionError("spread history contains " + format_period(p.period) + " at or after target " +
                                    format_period(target));
        }
        if (p.period >= window_start && slot_of_day(p.period) == slot) {
            sum += price_spread(p);
            ++count;
        }
    }
    if (count < kMinimumClimatologyObservations) {
        throw InsufficientDataError("only " + std::to_string(count) + " same-slot observations before " +
                                    format_period(target));
    }
    return {target, sum / static_cast<double>(count), SpreadEstimate::Source::kClimatology, count};
}

SpreadClimatology::SpreadClimatology(const PriceSeries& prices) {
    for (auto& slot : slots_) {
        slot.prefix.push_back(0.0);
    }
    for (const auto& [period, p] : prices) {
        auto& slot = slots_[static_cast<std::size_t>(slot_of_day(period))];
        slot.periods.push_back(period);
        slot.prefix.push_back(slot.prefix.back() + price_spread(p));
    }
}

SpreadEstimate SpreadClimatology::estimate(Period target, int window_days, Period latest_known) const {
    const auto& slot = slots_[static_cast<std::size_t>(slot_of_day(target))];
    const Period from = target - std::chrono::days{window_days};
    const auto first = std::lower_bound(slot.periods.begin(), slot.periods.end(), from);
    // strictly before target and no later than the latest known start
    auto last = std::lower_bound(slot.periods.begin(), slot.periods.end(), target);
    last = std::min(last, std::upper_bound(slot.periods.begin(), slot.periods.end(), latest_known));
    SpreadEstimate estimate{target, 0.0, SpreadEstimate::Source::kClimatology, 0};
    if (last <= first) {
        return estimate;
    }
    const auto i0 = static_cast<std::size_t>(first - slot.periods.begin());
    const auto i1 = static_cast<std::size_t>(last - slot.periods.begin());
    estimate.observations = i1 - i0;
    estimate.mean_spread = (slot.prefix[i1] - slot.prefix[i0]) / static_cast<double>(estimate.observations);
    return estimate;
}

double bid_median(const QuantileForecast& forecast, const StrategyConfig& config) {
    return config.bounds.clamp(forecast.median());
}

double bid_expected_optimal(const QuantileForecast& forecast, const SpreadEstimate& spread,
                            const StrategyConfig& config) {
    if (!std::isfinite(spread.mean_spread)) {
        throw InvalidInputError("non-finite spread estimate");
    }
    const double expected = expected_production(forecast, config.expectation);
    return config.bounds.clamp(expected - spread.mean_spread / (2.0 * config.k.value()));
}

OptimalBidDataset build_optimal_bid_dataset(std::span<const QuantileForecast> forecasts, const MarketData& market,
                                            const InformationPolicy& policy, int window_days,
                                            MarketImpactCoefficient k) {
    const SpreadClimatology climatology(market.prices);
    OptimalBidDataset dataset;
    dataset.candidates = forecasts.size();
    for (const auto& f : forecasts) {
        const auto prices = market.prices_at(f.period);
        const auto production = market.production_at(f.period);
        if (!prices || !production) {
            ++dataset.dropped;
            continue;
        }
        const Date day = market_day_of(f.period, policy.days);
        const SpreadEstimate spread = climatology.estimate(f.period, window_days, latest_known_start(policy, day));
        if (spread.observations < kMinimumClimatologyObservations) {
            ++dataset.dropped;
            continue;
        }
        dataset.rows.push_back({f.period, f.median(), slot_of_day(f.period), spread.mean_spread,
                                optimal_bid(*production, *prices, k)});
    }
    std::sort(dataset.rows.begin(), dataset.rows.end(),
              [](const auto& a, const auto& b) { return a.period < b.period; });
    return dataset;
}

void LinearBidRegressor::fit(const Eigen::Ref<const Eigen::MatrixXd>& features, std::span<const double> targets) {
    const Eigen::Index n = features.rows();
    if (static_cast<std::size_t>(n) != targets.size()) {
        throw ShapeError("feature rows and targets differ");
    }
    if (n == 0) {
        throw FitError("no training rows");
    }
    Eigen::MatrixXd design(n, features.cols() + 1);
    design.col(0).setOnes();
    design.rightCols(features.cols()) = features;
    const Eigen::Map<const Eigen::VectorXd> y(targets.data(), n);
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
    intercept_ = beta[0];
    coefficients_.assign(beta.data() + 1, beta.data() + beta.size());
    fitted_ = true;
}

void LinearBidRegressor::fit(std::span<const OptimalBidRow> rows) {
    Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()), 3);
    std::vector<double> targets;
    targets.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto f = rows[i].features();
        features.row(static_cast<Eigen::Index>(i)) << f[0], f[1], f[2];
        targets.push_back(rows[i].target);
    }
    fit(features, targets);
}

double LinearBidRegressor::predict(std::span<const double> features) const {
    if (!fitted_) {
        throw StateError("regressor has not been fitted");
    }
    if (features.size() != coefficients_.size()) {
        throw ShapeError("regressor expects " + std::to_string(coefficients_.size()) + " features");
    }
    double value = intercept_;
    for (std::size_t i = 0; i < features.size(); ++i) {
        value += coefficients_[i] * features[i];
    }
    return value;
}

double bid_learned(const LinearBidRegressor& regressor, std::span<const double> features, const StrategyConfig& config) {
    return config.bounds.clamp(regressor.predict(features));
}

std::vector<StrategyBid> bid_market_day(const StrategyConfig& config, const TeamSeries& source, const MarketData& market,
                                        const InformationPolicy& policy, Date day) {
    config.validate();
    const auto day_periods = periods_of_day(source, day);
    const SpreadClimatology climatology(market.prices);
    std::optional<LinearBidRegressor> regressor;
    if (config.kind == StrategyKind::kLearned) {
        std::vector<QuantileForecast> known;
        for (const auto& p : source.periods) {
            if (policy.realised_by(p.period, day)) {
                known.push_back(p.forecast());
            }
        }
        const auto dataset = build_optimal_bid_dataset(known, market, policy, config.climatology_window_days, config.k);
        regressor = train_for_day(config, dataset, policy, day);
    }
    return bid_day(config, day_periods, climatology, regressor ? &*regressor : nullptr, latest_known_start(policy, day));
}

TeamSeries run_strategy(const StrategyConfig& config, const TeamSeries& source, const MarketData& market,
                        const InformationPolicy& policy, std::span<const Date> days, std::size_t* fallback_count) {
    config.validate();
    const SpreadClimatology climatology(market.prices);
    OptimalBidDataset dataset;
    if (config.kind == StrategyKind::kLearned) {
        dataset = build_optimal_bid_dataset(source.forecasts(), market, policy, config.climatology_window_days, config.k);
    }
    TeamSeries out;
    out.team = source.team + "/" + std::string(to_string(config.kind));
    std::size_t fallbacks = 0;
    for (const Date day : days) {
        const auto day_periods = periods_of_day(source, day);
        std::optional<LinearBidRegressor> regressor;
        if (config.kind == StrategyKind::kLearned) {
            regressor = train_for_day(config, dataset, policy, day);
        }
        const auto bids =
            bid_day(config, day_periods, climatology, regressor ? &*regressor : nullptr, latest_known_start(policy, day));
        for (std::size_t i = 0; i < bids.size(); ++i) {
            TeamPeriod p = *day_periods[i];
            p.bid = bids[i].bid;
            fallbacks += bids[i].fallback ? 1 : 0;
            out.periods.push_back(p);
        }
    }
    std::sort(out.periods.begin(), out.periods.end(), [](const auto& a, const auto& b) { return a.period < b.period; });
    if (fallback_count != nullptr) {
        *fallback_count = fallbacks;
    }
    return out;
}

}  // namespace heftcom
