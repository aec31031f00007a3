#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heftcom/market.hpp"
#include "heftcom/quantiles.hpp"
#include "heftcom/scoring.hpp"

namespace heftcom {

/// One submitted (or benchmark-filled) period of a team.
struct TeamPeriod {
    Period period{};
    Date market_day{};
    QuantileValues q{};
    double bid = 0.0;
    bool filled = false;  // taken from the benchmark

    QuantileForecast forecast() const { return {period, q}; }
    double median() const { return q[kMedianIndex]; }
};

/// A team's per-period forecasts and bids, sorted by period.
struct TeamSeries {
    std::string team;
    std::vector<TeamPeriod> periods;

    std::vector<QuantileForecast> forecasts() const;
    std::size_t filled_count() const;
    const TeamPeriod* find(Period period) const;
};

using PriceSeries = std::map<Period, MarketPrices>;

/// Shared read-only market state: prices and realised production.
struct MarketData {
    PriceSeries prices;
    ProductionSeries production;

    std::optional<MarketPrices> prices_at(Period period) const;
    std::optional<double> production_at(Period period) const;
};

}  // namespace heftcom
