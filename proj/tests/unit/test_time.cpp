#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "heftcom/error.hpp"
#include "heftcom/time.hpp"

namespace heftcom {
namespace {

using namespace std::chrono;
using testing::at;
using testing::day;

TEST(Calendar, MarketDayHas48PeriodsOnOrdinaryDays) {
    const auto periods = market_day_periods(day("2024-02-20"), DayConvention::kLondon);
    ASSERT_EQ(periods.size(), 48u);
    EXPECT_EQ(periods.front(), at("2024-02-20T00:00Z"));
    EXPECT_EQ(periods.back(), at("2024-02-20T23:30Z"));
}

TEST(Calendar, SpringTransitionDayHas46Periods) {
    const auto periods = market_day_periods(day("2024-03-31"), DayConvention::kLondon);
    ASSERT_EQ(periods.size(), 46u);
    EXPECT_EQ(periods.front(), at("2024-03-31T00:00Z"));
    EXPECT_EQ(periods.back(), at("2024-03-31T22:30Z"));
}

TEST(Calendar, AutumnTransitionDayHas50Periods) {
    const auto periods = market_day_periods(day("2024-10-27"), DayConvention::kLondon);
    ASSERT_EQ(periods.size(), 50u);
    EXPECT_EQ(periods.front(), at("2024-10-26T23:00Z"));
    EXPECT_EQ(periods.back(), at("2024-10-27T23:30Z"));
}

TEST(Calendar, SummerDayStartsAt2300UtcTheDayBefore) {
    const auto periods = market_day_periods(day("2024-05-19"), DayConvention::kLondon);
    ASSERT_EQ(periods.size(), 48u);
    EXPECT_EQ(periods.front(), at("2024-05-18T23:00Z"));
    EXPECT_EQ(market_day_of(at("2024-05-18T23:00Z"), DayConvention::kLondon), day("2024-05-19"));
    EXPECT_EQ(market_day_of(at("2024-05-18T23:00Z"), DayConvention::kUtc), day("2024-05-18"));
}

TEST(Calendar, UtcConventionAlwaysHas48Periods) {
    EXPECT_EQ(market_day_periods(day("2024-03-31"), DayConvention::kUtc).size(), 48u);
    EXPECT_EQ(market_day_periods(day("2024-10-27"), DayConvention::kUtc).size(), 48u);
}

TEST(Calendar, CompetitionWindowSpans90MarketDays) {
    const auto days = market_days(day("2024-02-20"), day("2024-05-19"));
    ASSERT_EQ(days.size(), 90u);
    EXPECT_EQ(days.front(), day("2024-02-20"));
    EXPECT_EQ(days.back(), day("2024-05-19"));
}

TEST(Calendar, MarketDayRoundTripsEveryPeriod) {
    for (const Date d : market_days(day("2024-03-25"), day("2024-04-05"))) {
        for (const Period p : market_day_periods(d, DayConvention::kLondon)) {
            EXPECT_EQ(market_day_of(p, DayConvention::kLondon), d);
        }
    }
}

TEST(Calendar, SubmissionDeadlineIsPreviousDayAt0920Utc) {
    EXPECT_EQ(submission_deadline(day("2024-02-20")), at("2024-02-19T09:20Z"));
}

TEST(Calendar, SlotsAndDaytime) {
    EXPECT_EQ(slot_of_day(at("2024-02-20T00:00Z")), 0);
    EXPECT_EQ(slot_of_day(at("2024-02-20T23:30Z")), 47);
    EXPECT_FALSE(is_daytime(at("2024-02-20T07:30Z")));
    EXPECT_TRUE(is_daytime(at("2024-02-20T08:00Z")));
    EXPECT_TRUE(is_daytime(at("2024-02-20T19:30Z")));
    EXPECT_FALSE(is_daytime(at("2024-02-20T20:00Z")));
}

TEST(London, OffsetsAroundTransitions) {
    EXPECT_EQ(london_offset(at("2024-03-31T00:59:59Z")), seconds{0});
    EXPECT_EQ(london_offset(at("2024-03-31T01:00Z")), hours{1});
    EXPECT_EQ(london_offset(at("2024-10-27T00:59:59Z")), hours{1});
    EXPECT_EQ(london_offset(at("2024-10-27T01:00Z")), seconds{0});
}

TEST(London, LocalToUtc) {
    const auto local = [](const char* iso) { return local_seconds{at(iso).time_since_epoch()}; };
    EXPECT_EQ(london_to_utc(local("2024-01-10T12:00")), at("2024-01-10T12:00Z"));
    EXPECT_EQ(london_to_utc(local("2024-06-10T12:00")), at("2024-06-10T11:00Z"));
    EXPECT_THROW(london_to_utc(local("2024-03-31T01:30")), InvalidInputError);
    EXPECT_TRUE(is_ambiguous_london_time(local("2024-10-27T01:30")));
    EXPECT_EQ(london_to_utc(local("2024-10-27T01:30")), at("2024-10-27T00:30Z"));
    EXPECT_EQ(london_to_utc(local("2024-10-27T01:30"), true), at("2024-10-27T01:30Z"));
}

TEST(Timestamps, ParsesCommonIsoVariants) {
    const Period expected = at("2024-02-20T12:30:00Z");
    EXPECT_EQ(parse_utc_timestamp("2024-02-20 12:30"), expected);
    EXPECT_EQ(parse_utc_timestamp("2024-02-20T12:30:00"), expected);
    EXPECT_EQ(parse_utc_timestamp("2024-02-20T12:30:00.000Z"), expected);
    EXPECT_EQ(parse_utc_timestamp("2024-02-20 12:30:00 UTC"), expected);
    EXPECT_EQ(parse_utc_timestamp("2024-02-20T13:30:00+01:00"), expected);
    EXPECT_EQ(parse_utc_timestamp("2024-02-20T11:30:00-01"), expected);
    EXPECT_EQ(format_period(expected), "2024-02-20T12:30:00Z");
}

TEST(Timestamps, RejectsMalformedInput) {
    EXPECT_THROW(parse_utc_timestamp("20/02/2024 12:30"), InvalidInputError);
    EXPECT_THROW(parse_utc_timestamp("2024-02-20T25:00"), InvalidInputError);
    EXPECT_THROW(parse_utc_timestamp("2024-02-20T12:30+5"), InvalidInputError);
    EXPECT_THROW(parse_date("2024-02-30"), InvalidInputError);
}

TEST(Timestamps, Alignment) {
    EXPECT_TRUE(is_period_aligned(at("2024-02-20T12:30Z")));
    EXPECT_FALSE(is_period_aligned(at("2024-02-20T12:15Z")));
}

TEST(Conventions, ParseAndPrint) {
    EXPECT_EQ(parse_day_convention("london"), DayConvention::kLondon);
    EXPECT_EQ(parse_day_convention("utc"), DayConvention::kUtc);
    EXPECT_EQ(to_string(DayConvention::kUtc), "utc");
    EXPECT_THROW(parse_day_convention("cet"), Error);
}

}  // namespace
}  // namespace heftcom
