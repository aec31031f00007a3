#include "heftcom/market.hpp"

#include <cmath>
#include <string>

#include "heftcom/error.hpp"

namespace heftcom {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw InvalidInputError(std::string("non-finite ") + name);
    }
}

void require_finite(const MarketPrices& prices) {
    require_finite(prices.da_price, "day-ahead price");
    require_finite(prices.ss_price, "system price");
}

void require_finite(const TradePosition& position) {
    require_finite(position.bid, "bid");
    require_finite(position.production, "production");
}

}  // namespace

MarketImpactCoefficient::MarketImpactCoefficient(double k) : k_(k) {
    if (!std::isfinite(k) || k <= 0.0) {
        throw InvalidCoefficientError("market impact coefficient must be finite and > 0, got " + std::to_string(k));
    }
}

double effective_imbalance_price(const MarketPrices& prices, const TradePosition& position, MarketImpactCoefficient k) {
    require_finite(prices);
    require_finite(position);
    return prices.ss_price - k.value() * (position.production - position.bid);
}

double settle_revenue(const MarketPrices& prices, const TradePosition& position, MarketImpactCoefficient k) {
    const double imbalance_price = effective_imbalance_price(prices, position, k);
    const double imbalance = position.production - position.bid;
    return position.bid * prices.da_price + imbalance * imbalance_price;
}

double price_spread(const MarketPrices& prices) {
    return prices.ss_price - prices.da_price;
}

double optimal_bid(double production, const MarketPrices& prices, MarketImpactCoefficient k) {
    require_finite(production, "production");
    require_finite(prices);
    return production - price_spread(prices) / (2.0 * k.value());
}

double max_revenue(double production, const MarketPrices& prices, MarketImpactCoefficient k) {
    const TradePosition at_optimum{prices.period, optimal_bid(production, prices, k), production};
    return settle_revenue(prices, at_optimum, k);
}

double max_revenue_closed_form(double production, const MarketPrices& prices, MarketImpactCoefficient k) {
    require_finite(production, "production");
    require_finite(prices);
    const double spread = price_spread(prices);
    return production * prices.da_price + spread * spread / (4.0 * k.value());
}

}  // namespace heftcom
