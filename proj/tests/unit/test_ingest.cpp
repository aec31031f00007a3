#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "heftcom/csv.hpp"
#include "heftcom/error.hpp"
#include "heftcom/ingest.hpp"

namespace heftcom {
namespace {

using testing::at;
using testing::day;

SchemaMapping mapping_from(const std::string& text) {
    std::istringstream in(text);
    return SchemaMapping::parse(in);
}

TEST(LoadProduction, EmptyFileGivesEmptySeries) {
    std::istringstream in("");
    const auto r = load_production(in, SchemaMapping::canonical(SeriesKind::kProduction));
    EXPECT_TRUE(r.rows.empty());
    EXPECT_EQ(r.report.rows_read, 0u);
    EXPECT_EQ(r.report.to_text().rfind("0 rows read", 0), 0u);
}

TEST(LoadProduction, DuplicatePeriodKeepsLastRow) {
    std::istringstream in(
        "period_start_utc,wind_mwh,solar_mwh,total_mwh\n"
        "2024-02-20T00:00:00Z,10,0,10\n"
        "2024-02-20T00:00:00Z,12,1,13\n");
    const auto r = load_production(in, SchemaMapping::canonical(SeriesKind::kProduction));
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].total_mwh, 13.0);
    ASSERT_EQ(r.report.duplicates.size(), 1u);
    EXPECT_EQ(r.report.duplicates[0], at("2024-02-20T00:00Z"));
}

TEST(LoadProduction, LondonSourceAcrossSpringTransition) {
    // local half-hours of 31 March 2024 skip 01:00 and 01:30
    std::ostringstream text;
    text << "time,wind\n";
    for (int h = 0; h < 24; ++h) {
        if (h == 1) {
            continue;
        }
        for (const char* m : {"00", "30"}) {
            text << "31/03/2024 " << (h < 10 ? "0" : "") << h << ":" << m << "," << h << "\n";
        }
    }
    const auto mapping = mapping_from(
        "[source]\nkind = production\n"
        "[timestamp]\ncolumn = time\nformat = %d/%m/%Y %H:%M\ntimezone = Europe/London\n"
        "[fields]\ntotal_mwh = 2*wind\n");
    std::istringstream in(text.str());
    const auto r = load_production(in, mapping);
    ASSERT_EQ(r.rows.size(), 46u);
    EXPECT_EQ(r.rows.front().period, at("2024-03-31T00:00Z"));
    EXPECT_EQ(r.rows.back().period, at("2024-03-31T22:30Z"));
    EXPECT_EQ(r.rows.back().total_mwh, 46.0);
    EXPECT_TRUE(r.report.gaps.empty());
    const auto periods = market_day_periods(day("2024-03-31"), DayConvention::kLondon);
    for (std::size_t i = 0; i < periods.size(); ++i) {
        EXPECT_EQ(r.rows[i].period, periods[i]);
    }
}

TEST(LoadProduction, AutumnRepeatResolvesInOrder) {
    const auto mapping = mapping_from(
        "[timestamp]\ncolumn = t\ntimezone = Europe/London\n[fields]\ntotal_mwh = v\n");
    std::istringstream in("t,v\n2024-10-27 01:00,1\n2024-10-27 01:30,2\n2024-10-27 01:00,3\n2024-10-27 01:30,4\n");
    const auto r = load_production(in, mapping);
    ASSERT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.rows[0].period, at("2024-10-27T00:00Z"));
    EXPECT_EQ(r.rows[2].period, at("2024-10-27T01:00Z"));
    EXPECT_EQ(r.rows[3].total_mwh, 4.0);
}

TEST(LoadProduction, Errors) {
    const auto canonical = SchemaMapping::canonical(SeriesKind::kProduction);
    std::istringstream mixed("period_start_utc,wind_mwh,solar_mwh,total_mwh\n2024-02-20T00:15:00Z,1,1,2\n");
    try {
        load_production(mixed, canonical);
        FAIL();
    } catch (const LoadError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("granularity"), std::string::npos);
    }
    std::istringstream bad_time("period_start_utc,wind_mwh,solar_mwh,total_mwh\nyesterday,1,1,2\n");
    EXPECT_THROW(load_production(bad_time, canonical), LoadError);
    std::istringstream missing_column("period_start_utc,wind_mwh\n2024-02-20T00:00:00Z,1\n");
    EXPECT_THROW(load_production(missing_column, canonical), LoadError);
    std::istringstream inconsistent("period_start_utc,wind_mwh,solar_mwh,total_mwh\n2024-02-20T00:00:00Z,1,1,3\n");
    EXPECT_THROW(load_production(inconsistent, canonical), LoadError);
    std::istringstream negative("period_start_utc,wind_mwh,solar_mwh,total_mwh\n2024-02-20T00:00:00Z,-1,0,-1\n");
    EXPECT_THROW(load_production(negative, canonical), LoadError);
}

TEST(LoadProduction, ReportsGaps) {
    std::istringstream in(
        "period_start_utc,wind_mwh,solar_mwh,total_mwh\n"
        "2024-02-20T00:00:00Z,1,0,1\n"
        "2024-02-20T02:00:00Z,1,0,1\n");
    const auto r = load_production(in, SchemaMapping::canonical(SeriesKind::kProduction));
    ASSERT_EQ(r.report.gaps.size(), 1u);
    EXPECT_EQ(r.report.gaps[0].first, at("2024-02-20T00:30Z"));
    EXPECT_EQ(r.report.gaps[0].second, at("2024-02-20T02:00Z"));
}

TEST(LoadSubmissions, ClampsBidsAndWarnsOnCrossing) {
    std::istringstream in(
        "team,market_day,period_start_utc,q10,q20,q30,q40,q50,q60,q70,q80,q90,bid\n"
        "A,2024-02-20,2024-02-20T00:00:00Z,1,2,3,4,5,6,7,8,9,2500\n"
        "A,2024-02-20,2024-02-20T00:30:00Z,9,2,3,4,5,6,7,8,9,-4\n");
    const auto r = load_submissions(in, SchemaMapping::canonical(SeriesKind::kSubmissions));
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.rows[0].bid, 1800.0);
    EXPECT_EQ(r.rows[1].bid, 0.0);
    EXPECT_EQ(r.report.clamped_bids, 2u);
    EXPECT_EQ(r.report.warnings.size(), 1u);
}

TEST(LoadSubmissions, MarketDayDerivedWhenUnmapped) {
    const auto mapping = mapping_from(
        "[source]\nkind = submissions\ndelimiter = ;\n"
        "[timestamp]\ncolumn = datetime\n"
        "[fields]\nq10 = a\nq20 = a\nq30 = a\nq40 = a\nq50 = a\nq60 = a\nq70 = a\nq80 = a\nq90 = a\n"
        "bid = 1000*\"bid GWh\"\n"
        "[submission]\nteam = Solo\n");
    std::istringstream in("datetime;a;bid GWh\n2024-05-18T23:00:00Z;40;0.05\n");
    const auto r = load_submissions(in, mapping);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].team, "Solo");
    EXPECT_EQ(r.rows[0].market_day, day("2024-05-19"));
    EXPECT_DOUBLE_EQ(r.rows[0].bid, 50.0);
}

TEST(CanonicalFiles, WriteThenLoadIsIdentity) {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> v(0, 600);
    std::vector<CanonicalProductionRow> production;
    std::vector<MarketPrices> prices;
    std::vector<SubmissionRow> submissions;
    for (int i = 0; i < 96; ++i) {
        const Period p = at("2024-03-30T00:00Z") + kPeriodLength * i;
        const double w = v(rng) / 3;
        const double s = v(rng) / 7;
        production.push_back({p, w, s, w + s, std::nullopt});
        prices.push_back({p, v(rng) - 100, v(rng) / 9});
        SubmissionRow row{"Team, with comma", market_day_of(p, DayConvention::kLondon), p, {}, v(rng)};
        for (auto& q : row.q) {
            q = v(rng);
        }
        std::sort(row.q.begin(), row.q.end());
        submissions.push_back(row);
    }

    std::stringstream ps;
    write_production(ps, production);
    const auto p2 = load_production(ps, SchemaMapping::canonical(SeriesKind::kProduction)).rows;
    ASSERT_EQ(p2.size(), production.size());
    for (std::size_t i = 0; i < p2.size(); ++i) {
        EXPECT_EQ(p2[i].period, production[i].period);
        EXPECT_EQ(p2[i].wind_mwh, production[i].wind_mwh);
        EXPECT_EQ(p2[i].solar_mwh, production[i].solar_mwh);
        EXPECT_EQ(p2[i].total_mwh, production[i].total_mwh);
    }

    std::stringstream pr;
    write_prices(pr, prices);
    const auto pr2 = load_prices(pr, SchemaMapping::canonical(SeriesKind::kPrices)).rows;
    ASSERT_EQ(pr2.size(), prices.size());
    for (std::size_t i = 0; i < pr2.size(); ++i) {
        EXPECT_EQ(pr2[i].period, prices[i].period);
        EXPECT_EQ(pr2[i].da_price, prices[i].da_price);
        EXPECT_EQ(pr2[i].ss_price, prices[i].ss_price);
    }

    std::stringstream ss;
    write_submissions(ss, submissions);
    const auto s2 = load_submissions(ss, SchemaMapping::canonical(SeriesKind::kSubmissions)).rows;
    ASSERT_EQ(s2.size(), submissions.size());
    for (std::size_t i = 0; i < s2.size(); ++i) {
        EXPECT_EQ(s2[i].team, submissions[i].team);
        EXPECT_EQ(s2[i].market_day, submissions[i].market_day);
        EXPECT_EQ(s2[i].period, submissions[i].period);
        EXPECT_EQ(s2[i].q, submissions[i].q);
        EXPECT_EQ(s2[i].bid, submissions[i].bid);
    }
}

std::vector<Period> span_of(int first, int count) {
    std::vector<Period> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(at("2024-02-20T00:00Z") + kPeriodLength * (first + i));
    }
    return out;
}

TEST(Align, IdenticalSetsIncludeEverything) {
    const std::vector<AlignmentInput> in{{"missing price", span_of(0, 48)}, {"missing actual", span_of(0, 48)}};
    const auto a = align(in);
    EXPECT_EQ(a.included.size(), 48u);
    EXPECT_TRUE(a.excluded.empty());
}

TEST(Align, ThreeMissingPeriodsAreExcludedWithReasons) {
    auto actual = span_of(0, 48);
    actual.erase(actual.begin() + 10, actual.begin() + 13);
    const std::vector<AlignmentInput> in{{"missing price", span_of(0, 48)}, {"missing actual", actual}};
    const auto a = align(in);
    EXPECT_EQ(a.included.size(), 45u);
    ASSERT_EQ(a.excluded.size(), 3u);
    for (const auto& [p, reasons] : a.excluded) {
        EXPECT_EQ(reasons, std::vector<std::string>{"missing actual"});
        EXPECT_FALSE(a.includes(p));
    }
}

TEST(Align, CommutativeInInputOrder) {
    auto price = span_of(0, 96);
    price.erase(price.begin() + 5);
    auto actual = span_of(2, 90);
    auto submission = span_of(0, 96);
    submission.erase(submission.begin() + 40, submission.begin() + 44);
    std::vector<AlignmentInput> in{{"missing price", price}, {"missing actual", actual},
                                   {"missing submission", submission}};
    const auto domain = span_of(0, 96);
    const auto reference = align(in, domain);
    std::sort(in.begin(), in.end(), [](const auto& x, const auto& y) { return x.reason < y.reason; });
    do {
        const auto other = align(in, domain);
        EXPECT_EQ(other.included, reference.included);
        EXPECT_EQ(other.excluded, reference.excluded);
    } while (std::next_permutation(in.begin(), in.end(),
                                   [](const auto& x, const auto& y) { return x.reason < y.reason; }));
}

TEST(Align, DomainBoundsOutput) {
    const std::vector<AlignmentInput> in{{"missing price", span_of(0, 96)}, {"missing actual", span_of(0, 96)}};
    const auto domain = span_of(48, 48);
    const auto a = align(in, domain);
    EXPECT_EQ(a.included, domain);
}

TEST(Align, Errors) {
    const std::vector<AlignmentInput> one{{"missing price", span_of(0, 4)}};
    EXPECT_THROW(align(one), InvalidInputError);
    const std::vector<AlignmentInput> disjoint{{"missing price", span_of(0, 4)}, {"missing actual", span_of(10, 4)}};
    EXPECT_THROW(align(disjoint), AlignmentError);
}

TEST(CompetitionWindow, NinetyMarketDays) {
    EXPECT_EQ(market_days(day("2024-02-20"), day("2024-05-19")).size(), 90u);
}

TEST(LinearExpression, ParseAndPrint) {
    const auto e = LinearExpression::parse("0.5*Wind_MW - boa_MWh + 3");
    ASSERT_EQ(e.terms.size(), 3u);
    EXPECT_EQ(e.terms[0].scale, 0.5);
    EXPECT_EQ(e.terms[0].column, "Wind_MW");
    EXPECT_EQ(e.terms[1].scale, -1.0);
    EXPECT_TRUE(e.terms[2].column.empty());
    EXPECT_EQ(LinearExpression::parse(e.to_string()).to_string(), e.to_string());
    const auto quoted = LinearExpression::parse("2*\"Solar MW\"");
    EXPECT_EQ(quoted.terms[0].column, "Solar MW");
    EXPECT_THROW(LinearExpression::parse("a b"), ConfigError);
    EXPECT_THROW(LinearExpression::parse("2*"), ConfigError);
}

TEST(SchemaMapping, ValidationNamesUnmappedFields) {
    EXPECT_THROW(mapping_from("[source]\nkind = prices\n[fields]\nda_price = a\n"), ConfigError);
    EXPECT_THROW(mapping_from("[source]\nkind = submissions\n[fields]\nq10 = a\n"), ConfigError);
    EXPECT_THROW(mapping_from("[timestamp]\ntimezone = CET\n[fields]\ntotal_mwh = a\n"), ConfigError);
    EXPECT_NO_THROW(mapping_from("[fields]\nwind_mwh = a\nsolar_mwh = b\n"));
}

TEST(Csv, QuotingAndComments) {
    std::istringstream in("\xEF\xBB\xBF# comment\na,b\n\"x, y\", 2 \n\n");
    const auto t = read_csv(in);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.header[0], "a");
    EXPECT_EQ(t.rows[0][0], "x, y");
    EXPECT_EQ(t.rows[0][1], "2");
    EXPECT_EQ(t.line_numbers[0], 3u);
    std::istringstream ragged("a,b\n1\n");
    EXPECT_THROW(read_csv(ragged), LoadError);
    EXPECT_EQ(csv_field("x, y"), "\"x, y\"");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_fixed(22.175, 2), "22.18");
    EXPECT_THROW(parse_number("12abc"), InvalidInputError);
}

}  // namespace
}  // namespace heftcom
