#include "heftcom/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "heftcom/csv.hpp"
#include "heftcom/error.hpp"

namespace heftcom {

namespace {

namespace pt = boost::property_tree;

std::string trimmed(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "yes" || text == "1" || text == "on") {
        return true;
    }
    if (text == "false" || text == "no" || text == "0" || text == "off") {
        return false;
    }
    throw ConfigError(key + ": expected a boolean, got '" + text + "'");
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        return parse_number(text);
    } catch (const InvalidInputError&) {
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    }
}

long parse_integer(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (v != std::floor(v)) {
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    }
    return static_cast<long>(v);
}

/// Visits `section.key` when present.
template <class F>
void with(const pt::ptree& tree, const char* section, const char* key, F&& apply) {
    const auto child = tree.get_child_optional(section);
    if (!child) {
        return;
    }
    if (const auto value = child->get_optional<std::string>(key)) {
        const std::string text = trimmed(*value);
        if (!text.empty()) {
            try {
                apply(text);
            } catch (const Error& e) {
                throw ConfigError(std::string(section) + "." + key + ": " + e.what());
            }
        }
    }
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i > 0 ? "," : "") + items[i];
    }
    return out;
}

}  // namespace

std::filesystem::path DataPaths::resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : (dir / p).lexically_normal();
}

std::pair<Date, Date> parse_window(std::string_view text) {
    std::size_t sep = text.find("..");
    std::size_t width = 2;
    if (sep == std::string_view::npos) {
        sep = text.find(':');
        width = 1;
    }
    if (sep == std::string_view::npos) {
        throw ConfigError("window must look like 2024-02-20:2024-05-19");
    }
    try {
        return {parse_date(trimmed(text.substr(0, sep))), parse_date(trimmed(text.substr(sep + width)))};
    } catch (const InvalidInputError& e) {
        throw ConfigError(std::string("window: ") + e.what());
    }
}

std::vector<std::string> split_list(std::string_view text, char separator) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(separator, start), text.size());
        std::string item = trimmed(text.substr(start, end - start));
        if (!item.empty()) {
            out.push_back(std::move(item));
        }
        start = end + 1;
    }
    return out;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void RunConfig::validate(bool check_paths) const {
    if (!window_start.ok() || !window_end.ok() || window_end < window_start) {
        throw ConfigError("window start " + format_date(window_start) + " is after end " + format_date(window_end));
    }
    if (!(std::isfinite(k) && k > 0.0)) {
        throw ConfigError("k must be positive");
    }
    if (!(bounds.floor <= bounds.cap)) {
        throw ConfigError("bid floor exceeds bid cap");
    }
    if (!(analytics.var_level > 0.0 && analytics.var_level < 1.0)) {
        throw ConfigError("var_level must lie in (0, 1)");
    }
    if (!(analytics.cost_bin_width > 0.0 && analytics.histogram_width > 0.0) ||
        analytics.histogram_min > analytics.histogram_max) {
        throw ConfigError("analytics bin settings are invalid");
    }
    if (analytics.top_n < 1 || analytics.warmup_days < 0 || rules.max_missed < 0) {
        throw ConfigError("top_n, warmup_days and max_missed must be non-negative");
    }
    if (!(sanity_limit > 0.0)) {
        throw ConfigError("sanity_limit must be positive");
    }
    StrategyConfig{StrategyKind::kMedian, MarketImpactCoefficient{k}, bounds, climatology_days, expectation,
                   min_training_rows}
        .validate();
    if (!check_paths) {
        return;
    }
    const auto require = [&](const std::filesystem::path& p) {
        if (!std::filesystem::exists(data.resolve(p))) {
            throw ConfigError("missing input " + data.resolve(p).string());
        }
    };
    require(data.production);
    require(data.prices);
    require(data.submissions);
    require(data.teams);
    for (const auto& m : {data.production_mapping, data.prices_mapping, data.submissions_mapping}) {
        if (m) {
            require(*m);
        }
    }
}

std::string RunConfig::canonical_text() const {
    std::ostringstream out;
    const auto opt = [](const auto& v) { return v ? v->string() : std::string("-"); };
    out << "data.dir=" << data.dir.generic_string() << '\n'
        << "data.production=" << data.production.generic_string() << '\n'
        << "data.prices=" << data.prices.generic_string() << '\n'
        << "data.submissions=" << data.submissions.generic_string() << '\n'
        << "data.teams=" << data.teams.generic_string() << '\n'
        << "data.production_mapping=" << opt(data.production_mapping) << '\n'
        << "data.prices_mapping=" << opt(data.prices_mapping) << '\n'
        << "data.submissions_mapping=" << opt(data.submissions_mapping) << '\n'
        << "window=" << format_date(window_start) << ':' << format_date(window_end) << '\n'
        << "days=" << to_string(days) << '\n'
        << "k=" << format_number(k) << '\n'
        << "bid_floor=" << format_number(bounds.floor) << '\n'
        << "bid_cap=" << format_number(bounds.cap) << '\n'
        << "seed=" << seed << '\n'
        << "teams=" << join(teams) << '\n'
        << "benchmark=" << benchmark_team << '\n'
        << "fill_missing=" << fill_missing << '\n'
        << "max_missed=" << rules.max_missed << '\n'
        << "require_report=" << rules.require_report << '\n'
        << "sanitize=" << sanitize_team.value_or("-") << '\n'
        << "sanity_limit=" << format_number(sanity_limit) << '\n'
        << "strategy.source=" << strategy_source.value_or("-") << '\n';
    std::vector<std::string> kinds;
    for (const auto kind : strategies) {
        kinds.emplace_back(to_string(kind));
    }
    out << "strategy.kinds=" << join(kinds) << '\n'
        << "strategy.climatology_days=" << climatology_days << '\n'
        << "strategy.min_training_rows=" << min_training_rows << '\n'
        << "strategy.expectation=" << (expectation == ExpectationRule::kMedian ? "median" : "interpolated_mean") << '\n'
        << "analytics.var_level=" << format_number(analytics.var_level) << '\n'
        << "analytics.cost_bin_width=" << format_number(analytics.cost_bin_width) << '\n'
        << "analytics.histogram=" << format_number(analytics.histogram_width) << ','
        << format_number(analytics.histogram_min) << ',' << format_number(analytics.histogram_max) << '\n'
        << "analytics.warmup_days=" << analytics.warmup_days << '\n'
        << "analytics.top_n=" << analytics.top_n << '\n'
        << "analytics.skill_threshold=" << format_number(analytics.skill_threshold) << '\n'
        << "analytics.skill_exclusions=" << join(analytics.skill_exclusions) << '\n';
    return out.str();
}

std::string RunConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_text())));
    return buf;
}

RunConfig RunConfig::from_ini(std::istream& in, const RunConfig& defaults) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    const std::set<std::string> known_sections{"data", "run", "window", "market", "leaderboard", "strategy",
                                               "analytics"};
    for (const auto& [section, child] : tree) {
        if (known_sections.count(section) == 0) {
            throw ConfigError("config: unknown section [" + section + "]");
        }
    }

    RunConfig c = defaults;
    with(tree, "data", "dir", [&](const std::string& v) { c.data.dir = v; });
    with(tree, "data", "production", [&](const std::string& v) { c.data.production = v; });
    with(tree, "data", "prices", [&](const std::string& v) { c.data.prices = v; });
    with(tree, "data", "submissions", [&](const std::string& v) { c.data.submissions = v; });
    with(tree, "data", "teams", [&](const std::string& v) { c.data.teams = v; });
    with(tree, "data", "production_mapping", [&](const std::string& v) { c.data.production_mapping = v; });
    with(tree, "data", "prices_mapping", [&](const std::string& v) { c.data.prices_mapping = v; });
    with(tree, "data", "submissions_mapping", [&](const std::string& v) { c.data.submissions_mapping = v; });

    with(tree, "run", "out_dir", [&](const std::string& v) { c.out_dir = v; });
    with(tree, "run", "seed", [&](const std::string& v) { c.seed = static_cast<std::uint64_t>(parse_integer("seed", v)); });
    with(tree, "run", "teams", [&](const std::string& v) { c.teams = split_list(v); });

    with(tree, "window", "start", [&](const std::string& v) { c.window_start = parse_date(v); });
    with(tree, "window", "end", [&](const std::string& v) { c.window_end = parse_date(v); });
    with(tree, "window", "days", [&](const std::string& v) { c.days = parse_day_convention(v); });

    with(tree, "market", "k", [&](const std::string& v) { c.k = parse_double("k", v); });
    with(tree, "market", "bid_floor", [&](const std::string& v) { c.bounds.floor = parse_double("bid_floor", v); });
    with(tree, "market", "bid_cap", [&](const std::string& v) { c.bounds.cap = parse_double("bid_cap", v); });

    with(tree, "leaderboard", "benchmark", [&](const std::string& v) { c.benchmark_team = v; });
    with(tree, "leaderboard", "fill_missing", [&](const std::string& v) { c.fill_missing = parse_bool("fill_missing", v); });
    with(tree, "leaderboard", "max_missed",
         [&](const std::string& v) { c.rules.max_missed = static_cast<int>(parse_integer("max_missed", v)); });
    with(tree, "leaderboard", "require_report",
         [&](const std::string& v) { c.rules.require_report = parse_bool("require_report", v); });
    with(tree, "leaderboard", "sanitize", [&](const std::string& v) { c.sanitize_team = v; });
    with(tree, "leaderboard", "sanity_limit", [&](const std::string& v) { c.sanity_limit = parse_double("sanity_limit", v); });

    with(tree, "strategy", "source", [&](const std::string& v) { c.strategy_source = v; });
    with(tree, "strategy", "kinds", [&](const std::string& v) {
        c.strategies.clear();
        for (const auto& item : split_list(v)) {
            c.strategies.push_back(parse_strategy_kind(item));
        }
    });
    with(tree, "strategy", "climatology_days",
         [&](const std::string& v) { c.climatology_days = static_cast<int>(parse_integer("climatology_days", v)); });
    with(tree, "strategy", "min_training_rows", [&](const std::string& v) {
        c.min_training_rows = static_cast<std::size_t>(parse_integer("min_training_rows", v));
    });
    with(tree, "strategy", "expectation", [&](const std::string& v) {
        if (v == "median") {
            c.expectation = ExpectationRule::kMedian;
        } else if (v == "interpolated_mean") {
            c.expectation = ExpectationRule::kInterpolatedMean;
        } else {
            throw ConfigError("expectation must be median or interpolated_mean");
        }
    });

    auto& a = c.analytics;
    with(tree, "analytics", "var_level", [&](const std::string& v) { a.var_level = parse_double("var_level", v); });
    with(tree, "analytics", "cost_bin_width", [&](const std::string& v) { a.cost_bin_width = parse_double("cost_bin_width", v); });
    with(tree, "analytics", "histogram_width",
         [&](const std::string& v) { a.histogram_width = parse_double("histogram_width", v); });
    with(tree, "analytics", "histogram_min", [&](const std::string& v) { a.histogram_min = parse_double("histogram_min", v); });
    with(tree, "analytics", "histogram_max", [&](const std::string& v) { a.histogram_max = parse_double("histogram_max", v); });
    with(tree, "analytics", "warmup_days",
         [&](const std::string& v) { a.warmup_days = static_cast<int>(parse_integer("warmup_days", v)); });
    with(tree, "analytics", "top_n", [&](const std::string& v) { a.top_n = static_cast<int>(parse_integer("top_n", v)); });
    with(tree, "analytics", "skill_threshold",
         [&](const std::string& v) { a.skill_threshold = parse_double("skill_threshold", v); });
    with(tree, "analytics", "skill_exclusions", [&](const std::string& v) { a.skill_exclusions = split_list(v); });
    return c;
}

RunConfig RunConfig::from_ini(std::istream& in) {
    return from_ini(in, RunConfig{});
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    return from_file(path, RunConfig{});
}

RunConfig RunConfig::from_file(const std::filesystem::path& path, const RunConfig& defaults) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config " + path.string());
    }
    RunConfig c = from_ini(in, defaults);
    // a relative data directory is taken from the config's location
    const auto base = path.parent_path();
    if (c.data.dir.is_relative() && !base.empty()) {
        c.data.dir = base / c.data.dir;
    }
    return c;
}

}  // namespace heftcom
