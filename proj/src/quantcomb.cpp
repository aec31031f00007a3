#include "heftcom/quantcomb.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "heftcom/error.hpp"

namespace heftcom {

namespace {

constexpr std::string_view kModelHeader = "heftcom-qr-models v1";

std::string shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

double parse_double(const std::string& token) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw InvalidInputError("malformed number '" + token + "' in model file");
    }
    return value;
}

double pinball_sum(const Eigen::VectorXd& residuals, double level) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < residuals.size(); ++i) {
        const double r = residuals[i];
        total += r >= 0.0 ? level * r : (level - 1.0) * r;
    }
    return total;
}

/// Largest step in [0, 1] keeping v + step * dv non-negative.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
    double step = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (dv[i] < 0.0) {
            step = std::min(step, -v[i] / dv[i]);
        }
    }
    return step;
}

struct NewtonStep {
    Eigen::VectorXd dx, ds, dz, dw, dlambda;
};

// Primal-dual interior point (Frisch-Newton with Mehrotra correction) on the
// bounded LP dual of quantile regression:
//   min c'x  s.t.  A x = b,  0 <= x <= 1,  with A = X', c = -y, b = (1 - tau) X'1.
// The multipliers lambda on A x = b give the regression coefficients -lambda.
class FrischNewtonSolver {
public:
    FrischNewtonSolver(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, double tau)
        : X_(design), c_(-y), tau_(tau), n_(design.rows()) {
        b_ = (1.0 - tau) * X_.transpose() * Eigen::VectorXd::Ones(n_);
    }

    Eigen::VectorXd solve(double tolerance, int max_iterations, int& iterations) {
        Eigen::VectorXd x = Eigen::VectorXd::Constant(n_, 1.0 - tau_);
        Eigen::VectorXd s = Eigen::VectorXd::Constant(n_, tau_);

        // start the dual at the least-squares fit
        Eigen::VectorXd lambda = -(X_.transpose() * X_).ldlt().solve(X_.transpose() * -c_);
        const Eigen::VectorXd r = c_ - X_ * lambda;
        const double shift = std::max(0.1 * r.cwiseAbs().mean(), 1e-6 * (1.0 + c_.cwiseAbs().maxCoeff()));
        Eigen::VectorXd z = r.cwiseMax(0.0).array() + shift;
        Eigen::VectorXd w = (-r).cwiseMax(0.0).array() + shift;

        iterations = 0;
        for (; iterations < max_iterations; ++iterations) {
            const double gap = x.dot(z) + s.dot(w);
            const double primal = c_.dot(x);
            const Eigen::VectorXd rd = c_ - X_ * lambda - z + w;
            if (gap <= tolerance * (1.0 + std::abs(primal)) && rd.norm() <= 1e-9 * (1.0 + c_.norm())) {
                break;
            }
            const double mu = gap / static_cast<double>(2 * n_);
            const Eigen::VectorXd rp = b_ - X_.transpose() * x;
            const Eigen::VectorXd ru = Eigen::VectorXd::Ones(n_) - x - s;

            const Eigen::VectorXd theta =
                ((z.array() / x.array()) + (w.array() / s.array())).inverse().matrix();
            const Eigen::MatrixXd normal = X_.transpose() * theta.asDiagonal() * X_;
            const Eigen::LDLT<Eigen::MatrixXd> factor(normal);

            // predictor
            const Eigen::VectorXd rxz_aff = -(x.array() * z.array()).matrix();
            const Eigen::VectorXd rsw_aff = -(s.array() * w.array()).matrix();
            const NewtonStep aff = newton(factor, theta, x, s, z, w, rp, ru, rd, rxz_aff, rsw_aff);
            const double ap_aff = std::min(max_step(x, aff.dx), max_step(s, aff.ds));
            const double ad_aff = std::min(max_step(z, aff.dz), max_step(w, aff.dw));
            const double mu_aff = ((x + ap_aff * aff.dx).dot(z + ad_aff * aff.dz) +
                                   (s + ap_aff * aff.ds).dot(w + ad_aff * aff.dw)) /
                                  static_cast<double>(2 * n_);
            const double sigma = std::pow(mu_aff / mu, 3.0);

            // corrector
            const Eigen::VectorXd rxz =
                (sigma * mu - x.array() * z.array() - aff.dx.array() * aff.dz.array()).matrix();
            const Eigen::VectorXd rsw =
                (sigma * mu - s.array() * w.array() - aff.ds.array() * aff.dw.array()).matrix();
            const NewtonStep step = newton(factor, theta, x, s, z, w, rp, ru, rd, rxz, rsw);

            const double ap = std::min(1.0, 0.99995 * std::min(max_step(x, step.dx), max_step(s, step.ds)));
            const double ad = std::min(1.0, 0.99995 * std::min(max_step(z, step.dz), max_step(w, step.dw)));
            x += ap * step.dx;
            s += ap * step.ds;
            lambda += ad * step.dlambda;
            z += ad * step.dz;
            w += ad * step.dw;
        }
        return -lambda;
    }

private:
    NewtonStep newton(const Eigen::LDLT<Eigen::MatrixXd>& factor, const Eigen::VectorXd& theta,
                      const Eigen::VectorXd& x, const Eigen::VectorXd& s, const Eigen::VectorXd& z,
                      const Eigen::VectorXd& w, const Eigen::VectorXd& rp, const Eigen::VectorXd& ru,
                      const Eigen::VectorXd& rd, const Eigen::VectorXd& rxz, const Eigen::VectorXd& rsw) const {
        NewtonStep step;
        const Eigen::VectorXd rho = (rd.array() - rxz.array() / x.array() + rsw.array() / s.array() -
                                     (w.array() / s.array()) * ru.array())
                                        .matrix();
        step.dlambda = factor.solve(rp + X_.transpose() * theta.cwiseProduct(rho));
        step.dx = theta.cwiseProduct(X_ * step.dlambda - rho);
        step.ds = ru - step.dx;
        step.dz = ((rxz.array() - z.array() * step.dx.array()) / x.array()).matrix();
        step.dw = ((rsw.array() - w.array() * step.ds.array()) / s.array()).matrix();
        return step;
    }

    const Eigen::MatrixXd& X_;
    Eigen::VectorXd c_;
    Eigen::VectorXd b_;
    double tau_;
    Eigen::Index n_;
};

/// Solves the square system through the p observations that look most like
/// an optimal basis. Returns nothing when those rows are singular.
std::optional<Eigen::VectorXd> vertex_candidate(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                                const Eigen::VectorXd& residuals) {
    const Eigen::Index n = design.rows();
    const Eigen::Index p = design.cols();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(residuals[a]) < std::abs(residuals[b]); });

    Eigen::MatrixXd rows(p, p);
    Eigen::VectorXd rhs(p);
    Eigen::Index taken = 0;
    for (const Eigen::Index i : order) {
        if (taken == p) {
            break;
        }
        rows.row(taken) = design.row(i);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(rows.topRows(taken + 1));
        if (lu.rank() == taken + 1) {
            rhs[taken] = y[i];
            ++taken;
        }
    }
    if (taken < p) {
        return std::nullopt;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
    return Eigen::VectorXd(lu.solve(rhs));
}

}  // namespace

QuantileForecast sort_quantiles(const QuantileForecast& forecast) {
    QuantileForecast out = forecast;
    std::sort(out.q.begin(), out.q.end());
    return out;
}

QuantileForecast clip_to_capacity(const QuantileForecast& forecast, double available_capacity) {
    if (!std::isfinite(available_capacity) || available_capacity < 0.0) {
        throw InvalidInputError("available capacity must be finite and >= 0");
    }
    QuantileForecast out = forecast;
    for (double& v : out.q) {
        v = std::max(std::min(v, available_capacity), 0.0);
    }
    return out;
}

double QuantileRegressionModel::predict(std::span<const double> covariates) const {
    if (covariates.size() != coefficients.size()) {
        throw ShapeError("model expects " + std::to_string(coefficients.size()) + " covariates, got " +
                         std::to_string(covariates.size()));
    }
    double value = intercept;
    for (std::size_t i = 0; i < covariates.size(); ++i) {
        value += coefficients[i] * covariates[i];
    }
    return value;
}

double empirical_pinball_loss(const Eigen::Ref<const Eigen::MatrixXd>& covariates, std::span<const double> targets,
                              double level, double intercept, std::span<const double> coefficients) {
    if (static_cast<std::size_t>(covariates.cols()) != coefficients.size() ||
        static_cast<std::size_t>(covariates.rows()) != targets.size()) {
        throw ShapeError("dataset and parameter shapes disagree");
    }
    if (targets.empty()) {
        throw EmptyEvaluationError("empty dataset");
    }
    const Eigen::Map<const Eigen::VectorXd> beta(coefficients.data(), static_cast<Eigen::Index>(coefficients.size()));
    const Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(targets.size()));
    const Eigen::VectorXd residuals = y - covariates * beta - Eigen::VectorXd::Constant(y.size(), intercept);
    return pinball_sum(residuals, level) / static_cast<double>(targets.size());
}

QuantileRegressionFit fit_quantile_regression(const Eigen::Ref<const Eigen::MatrixXd>& covariates,
                                              std::span<const double> targets, double level,
                                              const QuantileRegressionOptions& options) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidLevelError("quantile level must lie in (0, 1), got " + std::to_string(level));
    }
    const Eigen::Index n = covariates.rows();
    const Eigen::Index p = covariates.cols() + 1;
    if (static_cast<std::size_t>(n) != targets.size()) {
        throw ShapeError("covariate rows (" + std::to_string(n) + ") and targets (" + std::to_string(targets.size()) +
                         ") differ");
    }
    if (n < p) {
        throw FitError("insufficient data: " + std::to_string(n) + " observations for " + std::to_string(p) +
                       " parameters");
    }
    const Eigen::Map<const Eigen::VectorXd> y(targets.data(), n);
    if (!covariates.allFinite() || !y.allFinite()) {
        throw FitError("non-finite values in quantile regression data");
    }

    Eigen::MatrixXd design(n, p);
    design.col(0).setOnes();
    design.rightCols(p - 1) = covariates;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        throw FitError("rank-deficient design: rank " + std::to_string(qr.rank()) + " for " + std::to_string(p) +
                       " columns (intercept + covariates)");
    }

    FrischNewtonSolver solver(design, y, level);
    QuantileRegressionFit fit;
    Eigen::VectorXd beta = solver.solve(options.gap_tolerance, options.max_iterations, fit.iterations);
    if (!beta.allFinite()) {
        throw FitError("quantile regression diverged");
    }
    double loss = pinball_sum(y - design * beta, level);

    if (options.polish) {
        if (auto vertex = vertex_candidate(design, y, y - design * beta)) {
            const double vertex_loss = pinball_sum(y - design * *vertex, level);
            if (vertex_loss <= loss) {
                beta = *vertex;
                loss = vertex_loss;
            }
        }
    }

    fit.model.level = level;
    fit.model.intercept = beta[0];
    fit.model.coefficients.assign(beta.data() + 1, beta.data() + p);
    fit.loss = loss / static_cast<double>(n);
    return fit;
}

QuantileForecast predict_meta(std::span<const QuantileRegressionModel> models, std::span<const double> covariates,
                              Period period) {
    if (models.size() != kLevelCount) {
        throw ShapeError("meta-model needs one model per level (" + std::to_string(kLevelCount) + "), got " +
                         std::to_string(models.size()));
    }
    QuantileForecast out;
    out.period = period;
    for (std::size_t i = 0; i < kLevelCount; ++i) {
        out.q[i] = models[i].predict(covariates);
    }
    out = sort_quantiles(out);
    for (double& v : out.q) {
        v = std::max(v, 0.0);
    }
    return out;
}

std::vector<QuantileRegressionModel> fit_meta_models(const Eigen::Ref<const Eigen::MatrixXd>& covariates,
                                                     std::span<const double> targets,
                                                     const QuantileRegressionOptions& options) {
    std::vector<QuantileRegressionModel> models;
    models.reserve(kLevelCount);
    for (const double level : kLevels) {
        models.push_back(fit_quantile_regression(covariates, targets, level, options).model);
    }
    return models;
}

std::vector<double> fill_base_quantiles(std::span<const std::optional<QuantileValues>> base_models) {
    QuantileValues mean{};
    std::size_t available = 0;
    for (const auto& model : base_models) {
        if (model) {
            for (std::size_t i = 0; i < kLevelCount; ++i) {
                mean[i] += (*model)[i];
            }
            ++available;
        }
    }
    if (available == 0) {
        throw InvalidInputError("no base model available to fill missing quantiles");
    }
    for (double& v : mean) {
        v /= static_cast<double>(available);
    }
    std::vector<double> row;
    row.reserve(base_models.size() * kLevelCount);
    for (const auto& model : base_models) {
        const QuantileValues& values = model ? *model : mean;
        row.insert(row.end(), values.begin(), values.end());
    }
    return row;
}

void write_models(std::ostream& out, std::span<const QuantileRegressionModel> models) {
    out << kModelHeader << '\n' << models.size() << '\n';
    for (const auto& m : models) {
        out << shortest(m.level) << ' ' << shortest(m.intercept) << ' ' << m.coefficients.size();
        for (const double c : m.coefficients) {
            out << ' ' << shortest(c);
        }
        out << '\n';
    }
}

std::vector<QuantileRegressionModel> read_models(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kModelHeader) {
        throw InvalidInputError("not a heftcom-qr-models v1 file");
    }
    std::size_t count = 0;
    if (!std::getline(in, line)) {
        throw InvalidInputError("model file truncated");
    }
    count = static_cast<std::size_t>(parse_double(line));
    std::vector<QuantileRegressionModel> models;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) {
            throw InvalidInputError("model file truncated");
        }
        std::istringstream fields(line);
        std::string token;
        QuantileRegressionModel m;
        fields >> token;
        m.level = parse_double(token);
        fields >> token;
        m.intercept = parse_double(token);
        fields >> token;
        const auto arity = static_cast<std::size_t>(parse_double(token));
        for (std::size_t j = 0; j < arity; ++j) {
            if (!(fields >> token)) {
                throw InvalidInputError("model line " + std::to_string(i + 1) + " has too few coefficients");
            }
            m.coefficients.push_back(parse_double(token));
        }
        models.push_back(std::move(m));
    }
    return models;
}

void AggregationConfig::validate() const {
    if (!(std::abs(rho) <= 1.0)) {
        throw InvalidInputError("correlation must lie in [-1, 1]");
    }
    if (sample_count < 1000) {
        throw InvalidInputError("aggregation needs at least 1000 samples");
    }
}

double sorted_sample_quantile(std::span<const double> sorted, double probability) {
    if (sorted.empty()) {
        throw EmptyEvaluationError("quantile of empty sample");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * probability;
    const auto lower = static_cast<std::size_t>(std::floor(h));
    const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
    return sorted[lower] + (h - static_cast<double>(lower)) * (sorted[upper] - sorted[lower]);
}

QuantileForecast aggregate_hybrid(const QuantileForecast& wind, const QuantileForecast& solar,
                                  const AggregationConfig& config) {
    config.validate();
    if (!is_monotone(wind.q) || !is_monotone(solar.q)) {
        throw PreconditionError("aggregate_hybrid requires monotone quantiles (apply sort_quantiles first)");
    }
    QuantileForecast out;
    out.period = wind.period;

    const auto degenerate = [](const QuantileValues& q) { return q.front() == q.back(); };
    if (config.rho == 1.0 || degenerate(wind.q) || degenerate(solar.q)) {
        for (std::size_t i = 0; i < kLevelCount; ++i) {
            out.q[i] = wind.q[i] + solar.q[i];
        }
        return out;
    }

    std::mt19937_64 engine(config.seed);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const auto uniform = [&engine] { return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53; };
    const auto normal_cdf = [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); };
    const double complement = std::sqrt(1.0 - config.rho * config.rho);

    std::vector<double> sums(config.sample_count);
    for (double& sum : sums) {
        // Box-Muller pair
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = kTwoPi * uniform();
        const double z1 = radius * std::cos(angle);
        const double z2 = config.rho * z1 + complement * radius * std::sin(angle);
        sum = interpolated_quantile(wind.q, normal_cdf(z1)) + interpolated_quantile(solar.q, normal_cdf(z2));
    }
    std::sort(sums.begin(), sums.end());
    for (std::size_t i = 0; i < kLevelCount; ++i) {
        out.q[i] = sorted_sample_quantile(sums, kLevels[i]);
    }
    return out;
}

}  // namespace heftcom
