#include "heftcom/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heftcom/error.hpp"

namespace heftcom {

namespace {

std::vector<const QuantileForecast*> sorted_unique(std::span<const QuantileForecast> forecasts) {
    std::vector<const QuantileForecast*> order;
    order.reserve(forecasts.size());
    for (const auto& f : forecasts) {
        order.push_back(&f);
    }
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->period < b->period; });
    const auto dup = std::adjacent_find(order.begin(), order.end(), [](auto* a, auto* b) { return a->period == b->period; });
    if (dup != order.end()) {
        throw InvalidInputError("duplicate forecast for period " + format_period((*dup)->period));
    }
    return order;
}

}  // namespace

bool in_window(Period period, TimeWindow window) {
    switch (window) {
        case TimeWindow::kAll:
            return true;
        case TimeWindow::kDaytime:
            return is_daytime(period);
        case TimeWindow::kOvernight:
            return !is_daytime(period);
    }
    return false;
}

double pinball_loss(double y, double q_alpha, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidLevelError("quantile level must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (!std::isfinite(y) || std::isnan(q_alpha)) {
        throw InvalidInputError("non-finite pinball input");
    }
    return y >= q_alpha ? (y - q_alpha) * alpha : (q_alpha - y) * (1.0 - alpha);
}

double mean_pinball(const QuantileValues& q, double y) {
    double total = 0.0;
    for (std::size_t i = 0; i < kLevelCount; ++i) {
        total += pinball_loss(y, q[i], kLevels[i]);
    }
    return total / static_cast<double>(kLevelCount);
}

PinballResult score_series(std::span<const QuantileForecast> forecasts, const ProductionSeries& actuals,
                           TimeWindow window) {
    PinballResult result;
    double day_sum = 0.0;
    double night_sum = 0.0;
    std::size_t day_n = 0;
    std::size_t night_n = 0;
    double total = 0.0;

    for (const auto* f : sorted_unique(forecasts)) {
        if (!in_window(f->period, window)) {
            continue;
        }
        const auto it = actuals.find(f->period);
        if (it == actuals.end()) {
            ++result.missing_actuals;
            result.excluded.push_back(f->period);
            continue;
        }
        const double score = mean_pinball(f->q, it->second);
        result.per_period.push_back({f->period, score});
        total += score;
        if (is_daytime(f->period)) {
            day_sum += score;
            ++day_n;
        } else {
            night_sum += score;
            ++night_n;
        }
    }
    if (result.per_period.empty()) {
        throw EmptyEvaluationError("no forecast period has a matching actual inside the window");
    }
    result.overall = total / static_cast<double>(result.per_period.size());
    if (day_n > 0) {
        result.daytime = day_sum / static_cast<double>(day_n);
    }
    if (night_n > 0) {
        result.overnight = night_sum / static_cast<double>(night_n);
    }
    return result;
}

std::vector<PeriodScore> expanding_pinball(std::span<const PeriodScore> scores) {
    std::vector<PeriodScore> out;
    out.reserve(scores.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        sum += scores[i].score;
        out.push_back({scores[i].period, sum / static_cast<double>(i + 1)});
    }
    return out;
}

ReliabilityDiagram reliability_diagram(std::span<const QuantileForecast> forecasts, const ProductionSeries& actuals,
                                       TimeWindow window) {
    ReliabilityDiagram diagram;
    diagram.window = window;
    std::array<std::size_t, kLevelCount> hits{};
    for (const auto* f : sorted_unique(forecasts)) {
        if (!in_window(f->period, window)) {
            continue;
        }
        const auto it = actuals.find(f->period);
        if (it == actuals.end()) {
            continue;
        }
        ++diagram.count;
        for (std::size_t i = 0; i < kLevelCount; ++i) {
            if (it->second <= f->q[i]) {
                ++hits[i];
            }
        }
    }
    if (diagram.count == 0) {
        throw EmptyEvaluationError("reliability diagram window contains no scored periods");
    }
    for (std::size_t i = 0; i < kLevelCount; ++i) {
        diagram.coverage[i] = static_cast<double>(hits[i]) / static_cast<double>(diagram.count);
    }
    return diagram;
}

}  // namespace heftcom
