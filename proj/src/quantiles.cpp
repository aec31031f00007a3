#include "heftcom/quantiles.hpp"

#include <algorithm>
#include <cmath>

namespace heftcom {

bool is_monotone(const QuantileValues& q) {
    return std::is_sorted(q.begin(), q.end());
}

bool is_finite(const QuantileValues& q) {
    return std::all_of(q.begin(), q.end(), [](double v) { return std::isfinite(v); });
}

double interpolated_quantile(const QuantileValues& q, double probability) {
    if (probability <= kLevels.front()) {
        return q.front();
    }
    if (probability >= kLevels.back()) {
        return q.back();
    }
    // levels are evenly spaced at 0.1
    const double position = probability * 10.0 - 1.0;
    const auto lower = std::min<std::size_t>(static_cast<std::size_t>(position), kLevelCount - 2);
    const double weight = position - static_cast<double>(lower);
    return q[lower] + weight * (q[lower + 1] - q[lower]);
}

double interpolated_mean(const QuantileValues& q) {
    // point masses of 0.1 at q10 and q90, uniform mass 0.1 on each interior segment
    double mean = 0.1 * (q.front() + q.back());
    for (std::size_t i = 0; i + 1 < kLevelCount; ++i) {
        mean += 0.05 * (q[i] + q[i + 1]);
    }
    return mean;
}

}  // namespace heftcom
