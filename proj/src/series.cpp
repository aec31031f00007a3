#include "heftcom/series.hpp"

#include <algorithm>

namespace heftcom {

std::vector<QuantileForecast> TeamSeries::forecasts() const {
    std::vector<QuantileForecast> out;
    out.reserve(periods.size());
    for (const auto& p : periods) {
        out.push_back(p.forecast());
    }
    return out;
}

std::size_t TeamSeries::filled_count() const {
    return static_cast<std::size_t>(std::count_if(periods.begin(), periods.end(), [](const auto& p) { return p.filled; }));
}

const TeamPeriod* TeamSeries::find(Period period) const {
    const auto it = std::lower_bound(periods.begin(), periods.end(), period,
                                     [](const TeamPeriod& p, Period t) { return p.period < t; });
    return it != periods.end() && it->period == period ? &*it : nullptr;
}

std::optional<MarketPrices> MarketData::prices_at(Period period) const {
    const auto it = prices.find(period);
    if (it == prices.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<double> MarketData::production_at(Period period) const {
    const auto it = production.find(period);
    if (it == production.end()) {
        return std::nullopt;
    }
    return it->second;
}

}  // namespace heftcom
