#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "heftcom/analytics.hpp"
#include "heftcom/app.hpp"
#include "heftcom/config.hpp"
#include "heftcom/error.hpp"
#include "heftcom/leaderboard.hpp"
#include "heftcom/market.hpp"
#include "heftcom/quantcomb.hpp"
#include "heftcom/scoring.hpp"

namespace py = pybind11;
using namespace heftcom;

namespace {

MarketPrices prices(double da_price, double ss_price) {
    return {Period{}, da_price, ss_price};
}

QuantileForecast forecast(const QuantileValues& q) {
    return {Period{}, q};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "C++ core: settlement, pinball scoring, quantile combination, analytics and ranking";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    m.attr("LEVELS") = py::cast(std::vector<double>(kLevels.begin(), kLevels.end()));

    // market
    m.def(
        "settle_revenue",
        [](double bid, double production, double da_price, double ss_price, double k) {
            return settle_revenue(prices(da_price, ss_price), {Period{}, bid, production}, MarketImpactCoefficient(k));
        },
        py::arg("bid"), py::arg("production"), py::arg("da_price"), py::arg("ss_price"),
        py::arg("k") = MarketImpactCoefficient::kDefault, "Revenue in GBP for one settlement period.");
    m.def(
        "optimal_bid",
        [](double production, double da_price, double ss_price, double k) {
            return optimal_bid(production, prices(da_price, ss_price), MarketImpactCoefficient(k));
        },
        py::arg("production"), py::arg("da_price"), py::arg("ss_price"), py::arg("k") = MarketImpactCoefficient::kDefault);
    m.def(
        "max_revenue",
        [](double production, double da_price, double ss_price, double k) {
            return max_revenue(production, prices(da_price, ss_price), MarketImpactCoefficient(k));
        },
        py::arg("production"), py::arg("da_price"), py::arg("ss_price"), py::arg("k") = MarketImpactCoefficient::kDefault);

    // scoring
    m.def("pinball_loss", &pinball_loss, py::arg("y"), py::arg("q"), py::arg("level"));
    m.def("mean_pinball", &mean_pinball, py::arg("q"), py::arg("y"), "Mean pinball over the nine levels.");

    // quantile combination
    m.def(
        "sort_quantiles", [](const QuantileValues& q) { return sort_quantiles(forecast(q)).q; }, py::arg("q"));
    m.def(
        "clip_to_capacity",
        [](const QuantileValues& q, double capacity) { return clip_to_capacity(forecast(q), capacity).q; },
        py::arg("q"), py::arg("capacity"));
    m.def(
        "aggregate_hybrid",
        [](const QuantileValues& wind, const QuantileValues& solar, double rho, std::size_t sample_count,
           std::uint64_t seed) {
            return aggregate_hybrid(forecast(wind), forecast(solar), {rho, sample_count, seed}).q;
        },
        py::arg("wind"), py::arg("solar"), py::arg("rho") = 1.0, py::arg("sample_count") = 100000,
        py::arg("seed") = 20240220);

    py::class_<QuantileRegressionFit>(m, "QuantileRegressionFit")
        .def_property_readonly("level", [](const QuantileRegressionFit& f) { return f.model.level; })
        .def_property_readonly("intercept", [](const QuantileRegressionFit& f) { return f.model.intercept; })
        .def_property_readonly("coefficients", [](const QuantileRegressionFit& f) { return f.model.coefficients; })
        .def_readonly("loss", &QuantileRegressionFit::loss)
        .def_readonly("iterations", &QuantileRegressionFit::iterations);
    m.def(
        "fit_quantile_regression",
        [](const Eigen::MatrixXd& covariates, const std::vector<double>& targets, double level) {
            return fit_quantile_regression(covariates, targets, level);
        },
        py::arg("covariates"), py::arg("targets"), py::arg("level"));

    // analytics
    py::class_<RevenueRisk>(m, "RevenueRisk")
        .def_readonly("mean", &RevenueRisk::mean)
        .def_readonly("sharpe", &RevenueRisk::sharpe)
        .def_readonly("sortino", &RevenueRisk::sortino)
        .def_readonly("var", &RevenueRisk::var)
        .def_readonly("es", &RevenueRisk::es);
    m.def(
        "revenue_risk", [](const std::vector<double>& revenues, double level) { return revenue_risk(revenues, level); },
        py::arg("revenues"), py::arg("var_level") = 0.05);

    py::class_<SkillValueFit>(m, "SkillValueFit")
        .def_readonly("slope", &SkillValueFit::slope)
        .def_readonly("intercept", &SkillValueFit::intercept)
        .def_readonly("ci_low", &SkillValueFit::ci_low)
        .def_readonly("ci_high", &SkillValueFit::ci_high)
        .def_readonly("p_value", &SkillValueFit::p_value)
        .def_readonly("n", &SkillValueFit::n)
        .def_readonly("excluded", &SkillValueFit::excluded);
    m.def(
        "skill_value_regression",
        [](const std::vector<std::tuple<std::string, double, double>>& points, double threshold,
           const std::vector<std::string>& exclusions) {
            std::vector<SkillPoint> p;
            for (const auto& [team, pinball, revenue_m] : points) {
                p.push_back({team, pinball, revenue_m});
            }
            return skill_value_regression(p, threshold, exclusions);
        },
        py::arg("points"), py::arg("pinball_threshold") = 31.0, py::arg("exclusions") = std::vector<std::string>{},
        "points: (team, pinball MWh, revenue GBP m) tuples.");

    // leaderboard
    py::class_<LeaderboardRow>(m, "LeaderboardRow")
        .def(py::init([](std::string team, double pinball, double revenue_m, bool eligible) {
                 LeaderboardRow r;
                 r.team = std::move(team);
                 r.pinball = pinball;
                 r.revenue_m = revenue_m;
                 r.eligible = eligible;
                 return r;
             }),
             py::arg("team"), py::arg("pinball"), py::arg("revenue_m"), py::arg("eligible") = true)
        .def_readonly("team", &LeaderboardRow::team)
        .def_readonly("pinball", &LeaderboardRow::pinball)
        .def_readonly("revenue_m", &LeaderboardRow::revenue_m)
        .def_readonly("eligible", &LeaderboardRow::eligible)
        .def_readonly("forecast_rank", &LeaderboardRow::forecast_rank)
        .def_readonly("trading_rank", &LeaderboardRow::trading_rank)
        .def_readonly("combined_rank", &LeaderboardRow::combined_rank);
    m.def(
        "rank_leaderboard",
        [](std::vector<LeaderboardRow> rows) {
            rank_leaderboard(rows);
            return rows;
        },
        py::arg("rows"), "Returns ranked copies ordered by pinball.");

    // commands
    m.def(
        "run_command",
        [](const std::string& command, const std::filesystem::path& config, std::optional<std::filesystem::path> data_dir,
           std::optional<std::filesystem::path> out_dir) {
            auto c = RunConfig::from_file(config);
            if (data_dir) {
                c.data.dir = *data_dir;
            }
            if (out_dir) {
                c.out_dir = *out_dir;
            }
            std::ostringstream log;
            const int status = run_command(command, c, log);
            return py::make_tuple(status, log.str());
        },
        py::arg("command"), py::arg("config"), py::arg("data_dir") = py::none(), py::arg("out_dir") = py::none(),
        "Runs a subcommand; returns (exit status, log text).");
}
