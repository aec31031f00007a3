#include "heftcom/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "heftcom/csv.hpp"
#include "heftcom/error.hpp"

namespace heftcom {

namespace {

using namespace std::chrono;

constexpr std::array<const char*, kLevelCount> kQuantileFields = {"q10", "q20", "q30", "q40", "q50",
                                                                   "q60", "q70", "q80", "q90"};

std::string row_context(const CsvTable& table, std::size_t row) {
    return "line " + std::to_string(table.line_numbers[row]);
}

/// Source column indices resolved once per file.
struct BoundExpression {
    std::vector<std::pair<double, std::optional<std::size_t>>> terms;

    double evaluate(const std::vector<std::string>& fields) const {
        double total = 0.0;
        for (const auto& [scale, column] : terms) {
            total += column ? scale * parse_number(fields[*column]) : scale;
        }
        return total;
    }
};

std::size_t require_column(const CsvTable& table, const std::string& name) {
    const auto index = table.find_column(name);
    if (!index) {
        throw LoadError("source has no column '" + name + "' required by the mapping");
    }
    return *index;
}

BoundExpression bind(const CsvTable& table, const LinearExpression& expression) {
    BoundExpression bound;
    for (const auto& term : expression.terms) {
        if (term.column.empty()) {
            bound.terms.emplace_back(term.scale, std::nullopt);
        } else {
            bound.terms.emplace_back(term.scale, require_column(table, term.column));
        }
    }
    return bound;
}

std::optional<BoundExpression> bind_field(const CsvTable& table, const SchemaMapping& mapping, const std::string& field) {
    const auto it = mapping.fields.find(field);
    if (it == mapping.fields.end()) {
        return std::nullopt;
    }
    return bind(table, it->second);
}

bool has_zone_suffix(std::string_view text) {
    if (text.empty()) {
        return false;
    }
    if (text.back() == 'Z' || (text.size() >= 3 && text.substr(text.size() - 3) == "UTC")) {
        return true;
    }
    return text.find('+', 10) != std::string_view::npos || text.find('-', 11) != std::string_view::npos;
}

/// Converts source timestamps to UTC, resolving the autumn repeat hour by
/// order of appearance.
class TimestampReader {
public:
    explicit TimestampReader(const SchemaMapping& mapping) : mapping_(mapping) {}

    Period read(const std::string& text) {
        if (mapping_.timestamp_format == "iso") {
            const sys_seconds parsed = parse_utc_timestamp(text);
            if (mapping_.timezone == SourceTimezone::kUtc || has_zone_suffix(text)) {
                return parsed;
            }
            return from_local(local_seconds{parsed.time_since_epoch()});
        }
        std::tm tm{};
        std::istringstream in(text);
        in >> std::get_time(&tm, mapping_.timestamp_format.c_str());
        if (in.fail()) {
            throw InvalidInputError("timestamp '" + text + "' does not match format '" + mapping_.timestamp_format + "'");
        }
        in >> std::ws;
        if (!in.eof()) {
            throw InvalidInputError("trailing characters in timestamp '" + text + "'");
        }
        const Date day{year{tm.tm_year + 1900}, month{static_cast<unsigned>(tm.tm_mon + 1)},
                       std::chrono::day{static_cast<unsigned>(tm.tm_mday)}};
        if (!day.ok()) {
            throw InvalidInputError("invalid date in timestamp '" + text + "'");
        }
        const seconds time_of_day = hours{tm.tm_hour} + minutes{tm.tm_min} + seconds{tm.tm_sec};
        if (mapping_.timezone == SourceTimezone::kUtc) {
            return sys_days{day} + time_of_day;
        }
        return from_local(local_days{day} + time_of_day);
    }

private:
    Period from_local(local_seconds local) {
        if (!is_ambiguous_london_time(local)) {
            return london_to_utc(local);
        }
        const bool repeat = !seen_ambiguous_.insert(local).second;
        return london_to_utc(local, repeat);
    }

    const SchemaMapping& mapping_;
    std::set<local_seconds> seen_ambiguous_;
};

Period read_period(TimestampReader& reader, const CsvTable& table, std::size_t row, std::size_t column) {
    Period period;
    try {
        period = reader.read(table.rows[row][column]);
    } catch (const Error& e) {
        throw LoadError(row_context(table, row) + ": " + e.what());
    }
    if (!is_period_aligned(period)) {
        throw LoadError(row_context(table, row) + ": timestamp " + table.rows[row][column] +
                        " is not a half-hour start (mixed granularity)");
    }
    return period;
}

template <class Row>
void finish_report(ValidationReport& report, std::vector<Row>& rows, const std::vector<Period>& periods) {
    // keyed rows were already deduplicated; list holes between consecutive periods
    for (std::size_t i = 1; i < periods.size(); ++i) {
        if (periods[i] - periods[i - 1] > kPeriodLength) {
            report.gaps.emplace_back(periods[i - 1] + kPeriodLength, periods[i]);
        }
    }
    report.rows_out = rows.size();
}

template <class Row>
LoadedSeries<Row> load_keyed(const CsvTable& table, const SchemaMapping& mapping,
                             const std::function<Row(std::size_t, Period)>& make_row) {
    LoadedSeries<Row> out;
    out.report.rows_read = table.rows.size();
    if (table.rows.empty()) {
        return out;
    }
    const std::size_t ts = require_column(table, mapping.timestamp_column);
    TimestampReader reader(mapping);
    std::map<Period, Row> by_period;
    std::set<Period> duplicates;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Period period = read_period(reader, table, i, ts);
        Row row = make_row(i, period);
        const auto [it, inserted] = by_period.insert_or_assign(period, std::move(row));
        if (!inserted) {
            duplicates.insert(period);
        }
    }
    out.report.duplicates.assign(duplicates.begin(), duplicates.end());
    std::vector<Period> periods;
    for (auto& [period, row] : by_period) {
        periods.push_back(period);
        out.rows.push_back(std::move(row));
    }
    finish_report(out.report, out.rows, periods);
    return out;
}

double evaluate(const BoundExpression& expression, const CsvTable& table, std::size_t row, const char* field) {
    double value = 0.0;
    try {
        value = expression.evaluate(table.rows[row]);
    } catch (const Error& e) {
        throw LoadError(row_context(table, row) + ": field " + field + ": " + e.what());
    }
    if (!std::isfinite(value)) {
        throw LoadError(row_context(table, row) + ": field " + field + " is not finite");
    }
    return value;
}

CsvTable read_table(std::istream& in, const SchemaMapping& mapping) {
    mapping.validate();
    return read_csv(in, mapping.delimiter);
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw LoadError("cannot open " + path.string());
    }
    return in;
}

template <class F>
auto with_path(const std::filesystem::path& path, F&& load) {
    auto in = open(path);
    try {
        return load(in);
    } catch (const LoadError& e) {
        throw LoadError(path.string() + ": " + e.what());
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool is_number(std::string_view text) {
    try {
        parse_number(text);
        return true;
    } catch (const InvalidInputError&) {
        return false;
    }
}

}  // namespace

SeriesKind parse_series_kind(std::string_view text) {
    if (text == "production") {
        return SeriesKind::kProduction;
    }
    if (text == "prices") {
        return SeriesKind::kPrices;
    }
    if (text == "submissions") {
        return SeriesKind::kSubmissions;
    }
    throw ConfigError("unknown series kind '" + std::string(text) + "'");
}

std::string_view to_string(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::kProduction:
            return "production";
        case SeriesKind::kPrices:
            return "prices";
        case SeriesKind::kSubmissions:
            return "submissions";
    }
    return "unknown";
}

LinearExpression LinearExpression::parse(std::string_view text) {
    LinearExpression expression;
    std::size_t pos = 0;
    const auto skip_space = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    };
    const auto read_token = [&]() -> std::string {
        skip_space();
        if (pos < text.size() && text[pos] == '"') {
            const std::size_t close = text.find('"', pos + 1);
            if (close == std::string_view::npos) {
                throw ConfigError("unterminated quote in expression '" + std::string(text) + "'");
            }
            std::string token(text.substr(pos + 1, close - pos - 1));
            pos = close + 1;
            return "\"" + token;  // marks a quoted column name
        }
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != '*' && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               !((text[pos] == '+' || text[pos] == '-') && pos > start && text[pos - 1] != 'e' && text[pos - 1] != 'E')) {
            ++pos;
        }
        return std::string(text.substr(start, pos - start));
    };

    double sign = 1.0;
    bool expect_term = true;
    while (true) {
        skip_space();
        if (pos >= text.size()) {
            break;
        }
        if (!expect_term) {
            if (text[pos] != '+' && text[pos] != '-') {
                throw ConfigError("expected + or - in expression '" + std::string(text) + "'");
            }
            sign = text[pos] == '-' ? -1.0 : 1.0;
            ++pos;
            expect_term = true;
            continue;
        }
        if (text[pos] == '-' || text[pos] == '+') {
            sign *= text[pos] == '-' ? -1.0 : 1.0;
            ++pos;
            continue;
        }
        std::string first = read_token();
        if (first.empty()) {
            throw ConfigError("malformed expression '" + std::string(text) + "'");
        }
        skip_space();
        LinearTerm term;
        if (pos < text.size() && text[pos] == '*') {
            ++pos;
            if (first[0] == '"' || !is_number(first)) {
                throw ConfigError("scale factor must be a number in '" + std::string(text) + "'");
            }
            term.scale = sign * parse_number(first);
            std::string column = read_token();
            if (column.empty()) {
                throw ConfigError("missing column after '*' in '" + std::string(text) + "'");
            }
            term.column = column[0] == '"' ? column.substr(1) : column;
        } else if (first[0] != '"' && is_number(first)) {
            term.scale = sign * parse_number(first);
        } else {
            term.scale = sign;
            term.column = first[0] == '"' ? first.substr(1) : first;
        }
        expression.terms.push_back(std::move(term));
        sign = 1.0;
        expect_term = false;
    }
    if (expression.terms.empty() || expect_term) {
        throw ConfigError("empty or incomplete expression '" + std::string(text) + "'");
    }
    return expression;
}

std::string LinearExpression::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        double scale = t.scale;
        if (i > 0) {
            out += scale < 0.0 ? " - " : " + ";
            scale = std::abs(scale);
        }
        if (t.column.empty()) {
            out += format_number(scale);
            continue;
        }
        if (scale != 1.0) {
            out += format_number(scale) + "*";
        }
        const bool quote = t.column.find_first_of(" \t+-*\"") != std::string::npos;
        out += quote ? "\"" + t.column + "\"" : t.column;
    }
    return out;
}

SchemaMapping SchemaMapping::canonical(SeriesKind kind) {
    SchemaMapping m;
    m.kind = kind;
    switch (kind) {
        case SeriesKind::kProduction:
            for (const char* f : {"wind_mwh", "solar_mwh", "total_mwh"}) {
                m.fields[f] = LinearExpression::column(f);
            }
            break;
        case SeriesKind::kPrices:
            for (const char* f : {"da_price", "ss_price"}) {
                m.fields[f] = LinearExpression::column(f);
            }
            break;
        case SeriesKind::kSubmissions:
            for (const char* f : kQuantileFields) {
                m.fields[f] = LinearExpression::column(f);
            }
            m.fields["bid"] = LinearExpression::column("bid");
            m.team_column = "team";
            m.market_day_column = "market_day";
            break;
    }
    return m;
}

SchemaMapping SchemaMapping::parse(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("mapping: ") + e.what());
    }

    SchemaMapping m;
    const pt::ptree empty;
    const auto& source = tree.get_child("source", empty);
    m.kind = parse_series_kind(source.get<std::string>("kind", "production"));
    const std::string delimiter = source.get<std::string>("delimiter", ",");
    if (delimiter == "tab" || delimiter == "\\t") {
        m.delimiter = '\t';
    } else if (delimiter.size() == 1) {
        m.delimiter = delimiter[0];
    } else {
        throw ConfigError("mapping: delimiter must be a single character or 'tab'");
    }

    const auto& ts = tree.get_child("timestamp", empty);
    m.timestamp_column = ts.get<std::string>("column", m.timestamp_column);
    m.timestamp_format = ts.get<std::string>("format", m.timestamp_format);
    const std::string zone = ts.get<std::string>("timezone", "UTC");
    if (zone == "UTC") {
        m.timezone = SourceTimezone::kUtc;
    } else if (zone == "Europe/London") {
        m.timezone = SourceTimezone::kLondon;
    } else {
        throw ConfigError("mapping: timezone must be UTC or Europe/London, got '" + zone + "'");
    }

    for (const auto& [field, value] : tree.get_child("fields", empty)) {
        m.fields[field] = LinearExpression::parse(value.data());
    }

    if (const auto sub = tree.get_child_optional("submission")) {
        if (auto v = sub->get_optional<std::string>("team_column")) {
            m.team_column = std::string(trim(*v));
        }
        if (auto v = sub->get_optional<std::string>("team")) {
            m.team = std::string(trim(*v));
        }
        if (auto v = sub->get_optional<std::string>("market_day_column")) {
            m.market_day_column = std::string(trim(*v));
        }
    }
    m.validate();
    return m;
}

SchemaMapping SchemaMapping::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open mapping " + path.string());
    }
    try {
        return parse(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void SchemaMapping::validate() const {
    const auto require = [&](const char* field) {
        if (fields.count(field) == 0) {
            throw ConfigError("mapping for " + std::string(heftcom::to_string(kind)) + " leaves '" + field +
                              "' unmapped");
        }
    };
    switch (kind) {
        case SeriesKind::kProduction:
            if (fields.count("total_mwh") == 0) {
                require("wind_mwh");
                require("solar_mwh");
            }
            break;
        case SeriesKind::kPrices:
            require("da_price");
            require("ss_price");
            break;
        case SeriesKind::kSubmissions:
            for (const char* f : kQuantileFields) {
                require(f);
            }
            require("bid");
            if (!team_column && !team) {
                throw ConfigError("submission mapping needs team_column or team");
            }
            break;
    }
    if (timestamp_column.empty()) {
        throw ConfigError("mapping has an empty timestamp column");
    }
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    out << rows_read << " rows read, " << rows_out << " rows out, " << duplicates.size() << " duplicates, "
        << gaps.size() << " gaps";
    if (clamped_bids > 0) {
        out << ", " << clamped_bids << " bids clamped";
    }
    out << '\n';
    for (const Period p : duplicates) {
        out << "duplicate " << format_period(p) << " (last row kept)\n";
    }
    for (const auto& [first, end] : gaps) {
        out << "gap " << format_period(first) << " to " << format_period(end) << " (" << (end - first) / kPeriodLength
            << " periods)\n";
    }
    for (const auto& w : warnings) {
        out << "warning " << w << '\n';
    }
    return out.str();
}

LoadedSeries<CanonicalProductionRow> load_production(std::istream& in, const SchemaMapping& mapping) {
    if (mapping.kind != SeriesKind::kProduction) {
        throw ConfigError("mapping is not for production");
    }
    const CsvTable table = read_table(in, mapping);
    if (table.rows.empty()) {
        return {{}, {}};
    }
    const auto wind = bind_field(table, mapping, "wind_mwh");
    const auto solar = bind_field(table, mapping, "solar_mwh");
    const auto total = bind_field(table, mapping, "total_mwh");
    const auto capacity = bind_field(table, mapping, "available_capacity_mwh");

    return load_keyed<CanonicalProductionRow>(table, mapping, [&](std::size_t i, Period period) {
        CanonicalProductionRow row;
        row.period = period;
        if (wind) {
            row.wind_mwh = evaluate(*wind, table, i, "wind_mwh");
        }
        if (solar) {
            row.solar_mwh = evaluate(*solar, table, i, "solar_mwh");
        }
        if (capacity) {
            row.available_capacity_mwh = evaluate(*capacity, table, i, "available_capacity_mwh");
        }
        if (total) {
            row.total_mwh = evaluate(*total, table, i, "total_mwh");
            if (row.wind_mwh && row.solar_mwh && std::abs(row.total_mwh - (*row.wind_mwh + *row.solar_mwh)) > 1e-6) {
                throw LoadError(row_context(table, i) + ": total_mwh differs from wind_mwh + solar_mwh");
            }
        } else {
            row.total_mwh = *row.wind_mwh + *row.solar_mwh;
        }
        for (const auto& v : {std::optional{row.total_mwh}, row.wind_mwh, row.solar_mwh, row.available_capacity_mwh}) {
            if (v && *v < 0.0) {
                throw LoadError(row_context(table, i) + ": negative production");
            }
        }
        return row;
    });
}

LoadedSeries<MarketPrices> load_prices(std::istream& in, const SchemaMapping& mapping) {
    if (mapping.kind != SeriesKind::kPrices) {
        throw ConfigError("mapping is not for prices");
    }
    const CsvTable table = read_table(in, mapping);
    if (table.rows.empty()) {
        return {{}, {}};
    }
    const auto da = *bind_field(table, mapping, "da_price");
    const auto ss = *bind_field(table, mapping, "ss_price");
    return load_keyed<MarketPrices>(table, mapping, [&](std::size_t i, Period period) {
        return MarketPrices{period, evaluate(da, table, i, "da_price"), evaluate(ss, table, i, "ss_price")};
    });
}

LoadedSeries<SubmissionRow> load_submissions(std::istream& in, const SchemaMapping& mapping, DayConvention convention,
                                             BidBounds bounds) {
    if (mapping.kind != SeriesKind::kSubmissions) {
        throw ConfigError("mapping is not for submissions");
    }
    const CsvTable table = read_table(in, mapping);
    LoadedSeries<SubmissionRow> out;
    out.report.rows_read = table.rows.size();
    if (table.rows.empty()) {
        return out;
    }
    const std::size_t ts = require_column(table, mapping.timestamp_column);
    const std::optional<std::size_t> team_col =
        mapping.team_column ? std::optional{require_column(table, *mapping.team_column)} : std::nullopt;
    const std::optional<std::size_t> day_col =
        mapping.market_day_column ? std::optional{require_column(table, *mapping.market_day_column)} : std::nullopt;
    std::array<BoundExpression, kLevelCount> quantiles;
    for (std::size_t j = 0; j < kLevelCount; ++j) {
        quantiles[j] = *bind_field(table, mapping, kQuantileFields[j]);
    }
    const auto bid = *bind_field(table, mapping, "bid");

    TimestampReader reader(mapping);
    std::map<std::pair<std::string, Period>, SubmissionRow> rows;
    std::set<Period> duplicates;
    std::size_t non_monotone = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        SubmissionRow row;
        row.period = read_period(reader, table, i, ts);
        row.team = team_col ? table.rows[i][*team_col] : *mapping.team;
        if (row.team.empty()) {
            throw LoadError(row_context(table, i) + ": empty team name");
        }
        if (day_col) {
            try {
                row.market_day = parse_date(table.rows[i][*day_col]);
            } catch (const Error& e) {
                throw LoadError(row_context(table, i) + ": " + e.what());
            }
        } else {
            row.market_day = market_day_of(row.period, convention);
        }
        for (std::size_t j = 0; j < kLevelCount; ++j) {
            row.q[j] = evaluate(quantiles[j], table, i, kQuantileFields[j]);
        }
        non_monotone += is_monotone(row.q) ? 0 : 1;
        const double raw_bid = evaluate(bid, table, i, "bid");
        row.bid = bounds.clamp(raw_bid);
        out.report.clamped_bids += row.bid != raw_bid ? 1 : 0;
        const auto key = std::make_pair(row.team, row.period);
        if (!rows.insert_or_assign(key, std::move(row)).second) {
            duplicates.insert(key.second);
        }
    }
    out.report.duplicates.assign(duplicates.begin(), duplicates.end());
    if (non_monotone > 0) {
        out.report.warnings.push_back(std::to_string(non_monotone) + " rows with non-monotone quantiles kept as submitted");
    }
    std::vector<Period> periods;
    for (auto& [key, row] : rows) {
        out.rows.push_back(std::move(row));
    }
    std::stable_sort(out.rows.begin(), out.rows.end(),
                     [](const SubmissionRow& a, const SubmissionRow& b) { return a.period < b.period; });
    // gaps are reported on the union of periods across teams
    std::set<Period> all;
    for (const auto& r : out.rows) {
        all.insert(r.period);
    }
    periods.assign(all.begin(), all.end());
    finish_report(out.report, out.rows, periods);
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const SubmissionRow& a, const SubmissionRow& b) {
        return a.team != b.team ? a.team < b.team : a.period < b.period;
    });
    return out;
}

LoadedSeries<CanonicalProductionRow> load_production(const std::filesystem::path& path, const SchemaMapping& mapping) {
    return with_path(path, [&](std::istream& in) { return load_production(in, mapping); });
}

LoadedSeries<MarketPrices> load_prices(const std::filesystem::path& path, const SchemaMapping& mapping) {
    return with_path(path, [&](std::istream& in) { return load_prices(in, mapping); });
}

LoadedSeries<SubmissionRow> load_submissions(const std::filesystem::path& path, const SchemaMapping& mapping,
                                             DayConvention convention, BidBounds bounds) {
    return with_path(path, [&](std::istream& in) { return load_submissions(in, mapping, convention, bounds); });
}

void write_production(std::ostream& out, std::span<const CanonicalProductionRow> rows) {
    const bool capacity = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.available_capacity_mwh; });
    std::vector<std::string> header{"period_start_utc", "wind_mwh", "solar_mwh", "total_mwh"};
    if (capacity) {
        header.emplace_back("available_capacity_mwh");
    }
    CsvWriter writer(out, header);
    for (const auto& r : rows) {
        if (!r.wind_mwh || !r.solar_mwh) {
            throw InvalidInputError("canonical production rows need wind and solar at " + format_period(r.period));
        }
        std::vector<std::string> fields{format_period(r.period), format_number(*r.wind_mwh), format_number(*r.solar_mwh),
                                        format_number(r.total_mwh)};
        if (capacity) {
            if (!r.available_capacity_mwh) {
                throw InvalidInputError("capacity missing at " + format_period(r.period));
            }
            fields.push_back(format_number(*r.available_capacity_mwh));
        }
        writer.row(fields);
    }
}

void write_prices(std::ostream& out, std::span<const MarketPrices> rows) {
    CsvWriter writer(out, {"period_start_utc", "da_price", "ss_price"});
    for (const auto& r : rows) {
        writer.row({format_period(r.period), format_number(r.da_price), format_number(r.ss_price)});
    }
}

void write_submissions(std::ostream& out, std::span<const SubmissionRow> rows) {
    std::vector<std::string> header{"team", "market_day", "period_start_utc"};
    header.insert(header.end(), kQuantileFields.begin(), kQuantileFields.end());
    header.emplace_back("bid");
    CsvWriter writer(out, header);
    for (const auto& r : rows) {
        std::vector<std::string> fields{r.team, format_date(r.market_day), format_period(r.period)};
        for (const double v : r.q) {
            fields.push_back(format_number(v));
        }
        fields.push_back(format_number(r.bid));
        writer.row(fields);
    }
}

MarketData make_market(std::span<const CanonicalProductionRow> production, std::span<const MarketPrices> prices) {
    MarketData market;
    for (const auto& r : production) {
        market.production[r.period] = r.total_mwh;
    }
    for (const auto& r : prices) {
        market.prices[r.period] = r;
    }
    return market;
}

std::map<std::string, TeamSeries> group_submissions(std::span<const SubmissionRow> rows) {
    std::map<std::string, TeamSeries> teams;
    for (const auto& r : rows) {
        auto& series = teams[r.team];
        series.team = r.team;
        series.periods.push_back({r.period, r.market_day, r.q, r.bid, false});
    }
    for (auto& [name, series] : teams) {
        std::stable_sort(series.periods.begin(), series.periods.end(),
                         [](const TeamPeriod& a, const TeamPeriod& b) { return a.period < b.period; });
    }
    return teams;
}

bool Alignment::includes(Period period) const {
    return std::binary_search(included.begin(), included.end(), period);
}

Alignment align(std::span<const AlignmentInput> inputs, std::span<const Period> domain) {
    if (inputs.size() < 2) {
        throw InvalidInputError("alignment needs at least two series");
    }
    std::vector<std::set<Period>> sets;
    sets.reserve(inputs.size());
    std::set<Period> universe(domain.begin(), domain.end());
    for (const auto& input : inputs) {
        sets.emplace_back(input.periods.begin(), input.periods.end());
        if (domain.empty()) {
            universe.insert(input.periods.begin(), input.periods.end());
        }
    }
    Alignment result;
    for (const Period p : universe) {
        std::vector<std::string> reasons;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            if (sets[i].count(p) == 0) {
                reasons.push_back(inputs[i].reason);
            }
        }
        if (reasons.empty()) {
            result.included.push_back(p);
        } else {
            std::sort(reasons.begin(), reasons.end());
            reasons.erase(std::unique(reasons.begin(), reasons.end()), reasons.end());
            result.excluded.emplace(p, std::move(reasons));
        }
    }
    if (result.included.empty()) {
        throw AlignmentError("series share no common period");
    }
    return result;
}

}  // namespace heftcom
