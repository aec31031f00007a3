#pragma once

// Quantile post-processing and combination: crossing repair, capacity
// clipping, linear quantile-regression meta-models over base-model
// quantiles, and wind + solar aggregation.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "heftcom/quantiles.hpp"

namespace heftcom {

/// Rearranges the values in ascending order and reassigns them to levels.
QuantileForecast sort_quantiles(const QuantileForecast& forecast);

/// min(q, capacity) floored at zero, level by level.
QuantileForecast clip_to_capacity(const QuantileForecast& forecast, double available_capacity);

struct QuantileRegressionModel {
    double level = 0.5;
    double intercept = 0.0;
    std::vector<double> coefficients;

    std::size_t arity() const { return coefficients.size(); }
    double predict(std::span<const double> covariates) const;
};

struct QuantileRegressionOptions {
    /// Relative duality gap at which the interior-point iteration stops.
    double gap_tolerance = 1e-12;
    int max_iterations = 200;
    /// Move the interior solution onto the nearest interpolating vertex when
    /// that does not increase the loss.
    bool polish = true;
};

struct QuantileRegressionFit {
    QuantileRegressionModel model;
    double loss = 0.0;  // mean pinball loss at the returned parameters
    int iterations = 0;
};

/// Minimises the empirical pinball loss of `targets` on an intercept plus
/// the columns of `covariates` (rows are observations).
QuantileRegressionFit fit_quantile_regression(const Eigen::Ref<const Eigen::MatrixXd>& covariates,
                                              std::span<const double> targets, double level,
                                              const QuantileRegressionOptions& options = {});

/// Mean pinball loss of a linear model on a dataset.
double empirical_pinball_loss(const Eigen::Ref<const Eigen::MatrixXd>& covariates, std::span<const double> targets,
                              double level, double intercept, std::span<const double> coefficients);

/// One model per level; `covariates` holds the concatenated base-model quantiles.
QuantileForecast predict_meta(std::span<const QuantileRegressionModel> models, std::span<const double> covariates,
                              Period period = Period{});

/// Fits one model per level against realised targets.
std::vector<QuantileRegressionModel> fit_meta_models(const Eigen::Ref<const Eigen::MatrixXd>& covariates,
                                                     std::span<const double> targets,
                                                     const QuantileRegressionOptions& options = {});

/// Concatenates base-model quantiles into a covariate row, replacing each
/// missing model by the level-wise mean of the models that are present.
std::vector<double> fill_base_quantiles(std::span<const std::optional<QuantileValues>> base_models);

/// Text format: a `heftcom-qr-models v1` header, then one line per model
/// with level, intercept, arity and coefficients.
void write_models(std::ostream& out, std::span<const QuantileRegressionModel> models);
std::vector<QuantileRegressionModel> read_models(std::istream& in);

struct AggregationConfig {
    double rho = 1.0;
    std::size_t sample_count = 100000;
    std::uint64_t seed = 20240220;

    void validate() const;
};

/// Sums two forecast distributions. rho = 1 is level-wise (comonotonic)
/// addition; otherwise a Gaussian copula with correlation rho couples the
/// margins and the nine levels are read off the simulated sums.
QuantileForecast aggregate_hybrid(const QuantileForecast& wind, const QuantileForecast& solar,
                                  const AggregationConfig& config = {});

/// Type-7 sample quantile (linear interpolation between order statistics)
/// of already sorted data.
double sorted_sample_quantile(std::span<const double> sorted, double probability);

}  // namespace heftcom
