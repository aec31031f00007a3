#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heftcom/market.hpp"
#include "heftcom/quantiles.hpp"
#include "heftcom/series.hpp"
#include "heftcom/time.hpp"

namespace heftcom {

enum class SeriesKind { kProduction, kPrices, kSubmissions };

SeriesKind parse_series_kind(std::string_view text);
std::string_view to_string(SeriesKind kind);

/// `scale * column`, or a constant when `column` is empty.
struct LinearTerm {
    double scale = 1.0;
    std::string column;
};

/// Sum of scaled source columns, e.g. `0.5*Wind_MW - boa_MWh`.
struct LinearExpression {
    std::vector<LinearTerm> terms;

    static LinearExpression parse(std::string_view text);
    static LinearExpression column(std::string name) { return {{{1.0, std::move(name)}}}; }
    std::string to_string() const;
};

enum class SourceTimezone { kUtc, kLondon };

/// Adapts a source file to a canonical series. Units are never inferred:
/// every scale factor appears in a field expression.
struct SchemaMapping {
    SeriesKind kind = SeriesKind::kProduction;
    char delimiter = ',';
    std::string timestamp_column = "period_start_utc";
    std::string timestamp_format = "iso";  // or a strftime pattern such as "%d/%m/%Y %H:%M"
    SourceTimezone timezone = SourceTimezone::kUtc;
    std::map<std::string, LinearExpression> fields;  // canonical field -> source expression

    // submissions only
    std::optional<std::string> team_column;
    std::optional<std::string> team;  // constant team name when the file holds one team
    std::optional<std::string> market_day_column;

    static SchemaMapping canonical(SeriesKind kind);
    static SchemaMapping parse(std::istream& in);
    static SchemaMapping from_file(const std::filesystem::path& path);

    /// Throws ConfigError when a required canonical field is unmapped.
    void validate() const;
};

struct CanonicalProductionRow {
    Period period{};
    std::optional<double> wind_mwh;
    std::optional<double> solar_mwh;
    double total_mwh = 0.0;
    std::optional<double> available_capacity_mwh;
};

struct SubmissionRow {
    std::string team;
    Date market_day{};
    Period period{};
    QuantileValues q{};
    double bid = 0.0;
};

struct ValidationReport {
    std::size_t rows_read = 0;
    std::size_t rows_out = 0;
    std::vector<Period> duplicates;                  // periods seen more than once; last row kept
    std::vector<std::pair<Period, Period>> gaps;     // [first missing, end) half-open
    std::size_t clamped_bids = 0;
    std::vector<std::string> warnings;

    std::string to_text() const;
};

template <class Row>
struct LoadedSeries {
    std::vector<Row> rows;
    ValidationReport report;
};

LoadedSeries<CanonicalProductionRow> load_production(std::istream& in, const SchemaMapping& mapping);
LoadedSeries<MarketPrices> load_prices(std::istream& in, const SchemaMapping& mapping);
LoadedSeries<SubmissionRow> load_submissions(std::istream& in, const SchemaMapping& mapping,
                                             DayConvention convention = DayConvention::kLondon,
                                             BidBounds bounds = {});

LoadedSeries<CanonicalProductionRow> load_production(const std::filesystem::path& path, const SchemaMapping& mapping);
LoadedSeries<MarketPrices> load_prices(const std::filesystem::path& path, const SchemaMapping& mapping);
LoadedSeries<SubmissionRow> load_submissions(const std::filesystem::path& path, const SchemaMapping& mapping,
                                             DayConvention convention = DayConvention::kLondon,
                                             BidBounds bounds = {});

void write_production(std::ostream& out, std::span<const CanonicalProductionRow> rows);
void write_prices(std::ostream& out, std::span<const MarketPrices> rows);
void write_submissions(std::ostream& out, std::span<const SubmissionRow> rows);

MarketData make_market(std::span<const CanonicalProductionRow> production, std::span<const MarketPrices> prices);

/// Groups submission rows by team, each series sorted by period.
std::map<std::string, TeamSeries> group_submissions(std::span<const SubmissionRow> rows);

/// Periods present in one series; periods missing from it are excluded
/// with `reason`.
struct AlignmentInput {
    std::string reason;
    std::vector<Period> periods;
};

struct Alignment {
    std::vector<Period> included;
    std::map<Period, std::vector<std::string>> excluded;  // reasons sorted

    bool includes(Period period) const;
};

/// Inner join over `domain` (or the union of all inputs when empty).
/// Periods outside a non-empty domain are dropped entirely.
Alignment align(std::span<const AlignmentInput> inputs, std::span<const Period> domain = {});

}  // namespace heftcom
