#pragma once

#include <array>
#include <cstddef>

#include "heftcom/time.hpp"

namespace heftcom {

inline constexpr std::size_t kLevelCount = 9;
inline constexpr std::array<double, kLevelCount> kLevels{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
inline constexpr std::size_t kMedianIndex = 4;

using QuantileValues = std::array<double, kLevelCount>;

/// Quantiles q10..q90 of half-hourly energy (MWh) for one settlement period.
struct QuantileForecast {
    Period period{};
    QuantileValues q{};

    double median() const { return q[kMedianIndex]; }
};

bool is_monotone(const QuantileValues& q);
bool is_finite(const QuantileValues& q);

/// Quantile function implied by the nine levels: piecewise linear between
/// levels, flat below 0.1 and above 0.9.
double interpolated_quantile(const QuantileValues& q, double probability);

/// Mean of the distribution defined by `interpolated_quantile`. Requires
/// monotone input.
double interpolated_mean(const QuantileValues& q);

}  // namespace heftcom
