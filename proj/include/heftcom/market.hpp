#pragma once

// Day-ahead settlement with a single imbalance price and a linear
// price-maker adjustment of the imbalance price.
//
// Volumes are energy per half-hour period (MWh), prices £/MWh, revenue £.

#include <algorithm>

#include "heftcom/time.hpp"

namespace heftcom {

struct MarketPrices {
    Period period{};
    double da_price = 0.0;  // day-ahead reference price
    double ss_price = 0.0;  // single system (imbalance) price
};

struct TradePosition {
    Period period{};
    double bid = 0.0;         // energy sold day-ahead
    double production = 0.0;  // realised energy
};

/// Slope of the imbalance price with respect to the participant's own
/// imbalance, in £/MWh per MWh. Must be strictly positive.
class MarketImpactCoefficient {
public:
    static constexpr double kDefault = 0.07;

    MarketImpactCoefficient() = default;
    explicit MarketImpactCoefficient(double k);

    double value() const { return k_; }

private:
    double k_ = kDefault;
};

/// Admissible bid range. The default cap is the 3.6 GW portfolio over one
/// half-hour.
struct BidBounds {
    double floor = 0.0;
    double cap = 1800.0;

    double clamp(double bid) const { return std::clamp(bid, floor, cap); }
    bool contains(double bid) const { return bid >= floor && bid <= cap; }
};

/// pi_S - k (y - x)
double effective_imbalance_price(const MarketPrices& prices, const TradePosition& position,
                                 MarketImpactCoefficient k = MarketImpactCoefficient{});

/// x pi_D + (y - x)(pi_S - k (y - x))
double settle_revenue(const MarketPrices& prices, const TradePosition& position,
                      MarketImpactCoefficient k = MarketImpactCoefficient{});

/// pi_S - pi_D
double price_spread(const MarketPrices& prices);

/// Revenue-maximising bid y - spread / (2k). Not clipped.
double optimal_bid(double production, const MarketPrices& prices, MarketImpactCoefficient k = MarketImpactCoefficient{});

/// Revenue settled at the unclipped optimal bid.
double max_revenue(double production, const MarketPrices& prices, MarketImpactCoefficient k = MarketImpactCoefficient{});

/// y pi_D + spread^2 / (4k); algebraically identical to `max_revenue`.
double max_revenue_closed_form(double production, const MarketPrices& prices,
                               MarketImpactCoefficient k = MarketImpactCoefficient{});

}  // namespace heftcom
