#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "heftcom/quantiles.hpp"

namespace heftcom {

/// Realised energy per period (MWh).
using ProductionSeries = std::map<Period, double>;

enum class TimeWindow { kAll, kDaytime, kOvernight };

bool in_window(Period period, TimeWindow window);

/// Pinball (quantile) loss of forecast `q_alpha` at level `alpha`.
double pinball_loss(double y, double q_alpha, double alpha);

/// Mean pinball loss over the nine levels.
double mean_pinball(const QuantileValues& q, double y);

struct PeriodScore {
    Period period{};
    double score = 0.0;
};

struct PinballResult {
    std::vector<PeriodScore> per_period;  // chronological
    double overall = 0.0;
    std::optional<double> daytime;
    std::optional<double> overnight;
    std::size_t missing_actuals = 0;      // forecast periods without an actual
    std::vector<Period> excluded;         // the periods behind `missing_actuals`
};

/// Scores forecasts against actuals over the periods inside `window`.
/// Input order does not matter; duplicate forecast periods are rejected.
PinballResult score_series(std::span<const QuantileForecast> forecasts, const ProductionSeries& actuals,
                           TimeWindow window = TimeWindow::kAll);

/// Running mean of per-period scores, element n averaging the first n.
std::vector<PeriodScore> expanding_pinball(std::span<const PeriodScore> scores);

struct ReliabilityDiagram {
    TimeWindow window = TimeWindow::kAll;
    std::size_t count = 0;
    std::array<double, kLevelCount> coverage{};  // fraction with y <= q_alpha
};

ReliabilityDiagram reliability_diagram(std::span<const QuantileForecast> forecasts, const ProductionSeries& actuals,
                                       TimeWindow window = TimeWindow::kAll);

}  // namespace heftcom
