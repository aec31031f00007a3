#include "heftcom/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "heftcom/error.hpp"
#include "heftcom/quantcomb.hpp"
#include "heftcom/scoring.hpp"

namespace heftcom {

namespace {

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return sorted_sample_quantile(values, 0.5);
}

std::optional<double> sample_sd(std::span<const double> values) {
    if (values.size() < 2) {
        return std::nullopt;
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (const double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

int sign(double v) {
    return (v > 0.0) - (v < 0.0);
}

}  // namespace

TradeLedger settle_team(const TeamSeries& team, const MarketData& market, MarketImpactCoefficient k) {
    TradeLedger ledger;
    ledger.records.reserve(team.periods.size());
    for (const auto& p : team.periods) {
        const auto prices = market.prices_at(p.period);
        const auto production = market.production_at(p.period);
        if (!prices || !production) {
            ++ledger.excluded;
            continue;
        }
        TradeRecord r;
        r.period = p.period;
        r.median = p.median();
        r.bid = p.bid;
        r.production = *production;
        r.prices = *prices;
        r.revenue = settle_revenue(*prices, {p.period, p.bid, *production}, k);
        r.max_revenue = max_revenue(*production, *prices, k);
        r.pinball = mean_pinball(p.q, *production);
        ledger.total_revenue += r.revenue;
        ledger.records.push_back(r);
    }
    return ledger;
}

std::vector<PeriodValue> revenue_series(const TeamSeries& team, const MarketData& market, MarketImpactCoefficient k) {
    const TradeLedger ledger = settle_team(team, market, k);
    std::vector<PeriodValue> out;
    out.reserve(ledger.records.size());
    for (const auto& r : ledger.records) {
        out.push_back({r.period, r.revenue});
    }
    return out;
}

std::vector<OpportunityCost> opportunity_cost(std::span<const TradeRecord> records, double volume_epsilon) {
    std::vector<OpportunityCost> out;
    for (const auto& r : records) {
        if (r.bid <= volume_epsilon) {
            continue;
        }
        out.push_back({r.period, r.pinball, std::max(0.0, (r.max_revenue - r.revenue) / r.bid)});
    }
    return out;
}

std::vector<BinnedMedian> bin_opportunity_cost(std::span<const OpportunityCost> costs, double bin_width) {
    if (!(bin_width > 0.0)) {
        throw InvalidInputError("bin width must be positive");
    }
    std::map<long, std::vector<double>> bins;
    for (const auto& c : costs) {
        bins[static_cast<long>(std::floor(c.pinball / bin_width))].push_back(c.cost);
    }
    std::vector<BinnedMedian> out;
    for (auto& [index, values] : bins) {
        const double low = static_cast<double>(index) * bin_width;
        out.push_back({low, low + bin_width, values.size(), median_of(values)});
    }
    return out;
}

std::map<int, double> capture_ratio(std::span<const TradeRecord> records) {
    std::map<int, std::vector<double>> groups;
    for (const auto& r : records) {
        if (r.max_revenue > 0.0) {
            groups[slot_of_day(r.period)].push_back(r.revenue / r.max_revenue);
        }
    }
    std::map<int, double> out;
    for (auto& [slot, ratios] : groups) {
        out[slot] = median_of(std::move(ratios));
    }
    return out;
}

RevenueRisk revenue_risk(std::span<const double> revenues, double var_level) {
    if (revenues.empty()) {
        throw EmptyEvaluationError("no revenue to summarise");
    }
    if (!(var_level > 0.0 && var_level < 1.0)) {
        throw InvalidLevelError("VaR level must lie in (0, 1)");
    }
    RevenueRisk risk;
    risk.mean = std::accumulate(revenues.begin(), revenues.end(), 0.0) / static_cast<double>(revenues.size());
    if (const auto sd = sample_sd(revenues); sd && *sd > 0.0) {
        risk.sharpe = risk.mean / *sd;
    }
    std::vector<double> negative;
    std::copy_if(revenues.begin(), revenues.end(), std::back_inserter(negative), [](double v) { return v < 0.0; });
    if (const auto sd = sample_sd(negative); sd && *sd > 0.0) {
        risk.sortino = risk.mean / *sd;
    }

    std::vector<double> sorted(revenues.begin(), revenues.end());
    std::sort(sorted.begin(), sorted.end());
    risk.var = sorted_sample_quantile(sorted, var_level);
    const auto tail_end = std::lower_bound(sorted.begin(), sorted.end(), risk.var);
    if (tail_end == sorted.begin()) {
        risk.es = risk.var;
    } else {
        risk.es = std::accumulate(sorted.begin(), tail_end, 0.0) / static_cast<double>(tail_end - sorted.begin());
    }
    return risk;
}

TradeStats trade_stats(std::span<const TradeRecord> records, double var_level) {
    if (records.empty()) {
        throw EmptyEvaluationError("no settled periods for trade statistics");
    }
    TradeStats stats;
    stats.periods = records.size();
    std::vector<double> revenues;
    revenues.reserve(records.size());
    double wins = 0.0;
    double bid_volume = 0.0;
    double production = 0.0;
    double traded_value = 0.0;
    double total = 0.0;
    for (const auto& r : records) {
        revenues.push_back(r.revenue);
        wins += r.revenue > 0.0 ? 1.0 : 0.0;
        bid_volume += r.bid;
        production += r.production;
        traded_value += r.bid * r.prices.da_price;
        total += r.revenue;
    }
    stats.win_rate = wins / static_cast<double>(records.size());
    stats.relative_bid_volume = production > 0.0 ? bid_volume / production : 0.0;
    if (bid_volume > 0.0) {
        stats.trade_vwap = traded_value / bid_volume;
    }
    if (production > 0.0) {
        stats.production_vwap = total / production;
    }
    const RevenueRisk risk = revenue_risk(revenues, var_level);
    stats.sharpe = risk.sharpe;
    stats.sortino = risk.sortino;
    stats.var = risk.var;
    stats.es = risk.es;
    return stats;
}

DirectionStats direction_stats(std::span<const TradeRecord> records) {
    DirectionStats stats;
    std::size_t correct = 0;
    std::size_t opposite = 0;
    for (const auto& r : records) {
        const int spread = sign(price_spread(r.prices));
        if (spread == 0) {
            continue;
        }
        if (const int deviation = sign(r.median - r.bid); deviation != 0) {
            ++stats.bid_decidable;
            correct += deviation == spread ? 1 : 0;
        }
        if (const int position = sign(r.bid - r.production); position != 0) {
            ++stats.imbalance_decidable;
            opposite += position == -spread ? 1 : 0;
        }
    }
    if (stats.bid_decidable > 0) {
        stats.correct_bid_direction = static_cast<double>(correct) / static_cast<double>(stats.bid_decidable);
    }
    if (stats.imbalance_decidable > 0) {
        stats.imbalance_opposite_spread = static_cast<double>(opposite) / static_cast<double>(stats.imbalance_decidable);
    }
    return stats;
}

Histogram histogram_of(std::span<const double> values, double width, double min, double max) {
    if (!(width > 0.0) || !(min <= max)) {
        throw InvalidInputError("histogram needs positive width and min <= max");
    }
    Histogram h;
    h.width = width;
    h.min = min;
    h.max = max;
    const long first = std::lround(min / width);
    const long last = std::lround(max / width);
    for (long i = first; i <= last; ++i) {
        h.centers.push_back(static_cast<double>(i) * width);
    }
    h.counts.assign(h.centers.size(), 0);
    for (const double v : values) {
        const long index = static_cast<long>(std::floor(v / width + 0.5));
        if (index < first) {
            ++h.underflow;
        } else if (index > last) {
            ++h.overflow;
        } else {
            ++h.counts[static_cast<std::size_t>(index - first)];
        }
    }
    return h;
}

Histogram strategic_bid_histogram(std::span<const TradeRecord> records, double width, double min, double max) {
    std::vector<double> deviations;
    deviations.reserve(records.size());
    for (const auto& r : records) {
        deviations.push_back(r.median - r.bid);
    }
    return histogram_of(deviations, width, min, max);
}

SkillValueFit skill_value_regression(std::span<const SkillPoint> points, double pinball_threshold,
                                     std::span<const std::string> outlier_exclusions) {
    SkillValueFit fit;
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& p : points) {
        if (std::find(outlier_exclusions.begin(), outlier_exclusions.end(), p.team) != outlier_exclusions.end()) {
            fit.excluded.push_back(p.team);
            continue;
        }
        if (!(p.pinball < pinball_threshold) || !std::isfinite(p.revenue_m)) {
            continue;
        }
        x.push_back(p.pinball);
        y.push_back(p.revenue_m);
    }
    fit.n = x.size();
    if (fit.n < 3) {
        throw FitError("skill-value regression needs at least 3 teams, got " + std::to_string(fit.n));
    }
    const double n = static_cast<double>(fit.n);
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < fit.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) {
        throw FitError("skill-value regression: all included teams share one pinball score");
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < fit.n; ++i) {
        const double e = y[i] - fit.intercept - fit.slope * x[i];
        sse += e * e;
    }
    const double se = std::sqrt(sse / (n - 2.0) / sxx);
    const boost::math::students_t t(n - 2.0);
    const double critical = boost::math::quantile(t, 0.975);
    fit.ci_low = fit.slope - critical * se;
    fit.ci_high = fit.slope + critical * se;
    fit.p_value = se > 0.0 ? 2.0 * boost::math::cdf(boost::math::complement(t, std::abs(fit.slope / se))) : 0.0;
    return fit;
}

}  // namespace heftcom
