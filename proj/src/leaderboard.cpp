#include "heftcom/leaderboard.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "heftcom/analytics.hpp"
#include "heftcom/error.hpp"

namespace heftcom {

FillResult fill_missing(const TeamSeries& team, const TeamSeries& benchmark, std::span<const Date> days,
                        DayConvention convention) {
    std::map<Period, const TeamPeriod*> own;
    std::set<Date> submitted;
    for (const auto& p : team.periods) {
        own[p.period] = &p;
        submitted.insert(p.market_day);
    }

    FillResult result;
    result.series.team = team.team;
    for (const Date day : days) {
        const bool day_missing = submitted.count(day) == 0;
        if (day_missing) {
            result.missed_days.push_back(day);
        }
        for (const Period period : market_day_periods(day, convention)) {
            const auto it = own.find(period);
            if (!day_missing && it != own.end() && it->second->market_day == day) {
                result.series.periods.push_back(*it->second);
                continue;
            }
            const TeamPeriod* fill = benchmark.find(period);
            if (fill == nullptr) {
                throw DataError("benchmark has no entry for " + format_period(period) + " needed to fill " + team.team);
            }
            TeamPeriod filled = *fill;
            filled.market_day = day;
            filled.filled = true;
            result.series.periods.push_back(filled);
            if (!day_missing) {
                ++result.partial_periods;
            }
        }
    }
    return result;
}

bool is_eligible(const TeamRecord& team, const LeaderboardRules& rules) {
    if (team.organiser) {
        return false;
    }
    if (rules.require_report && !team.report_submitted) {
        return false;
    }
    return team.missed_submissions <= rules.max_missed;
}

void rank_leaderboard(std::vector<LeaderboardRow>& rows) {
    std::vector<LeaderboardRow*> eligible;
    for (auto& row : rows) {
        row.forecast_rank.reset();
        row.trading_rank.reset();
        row.combined_rank.reset();
        row.pinball_tie = false;
        row.revenue_tie = false;
        if (row.eligible) {
            eligible.push_back(&row);
        }
    }

    std::stable_sort(eligible.begin(), eligible.end(), [](auto* a, auto* b) {
        return a->pinball != b->pinball ? a->pinball < b->pinball : a->team < b->team;
    });
    for (std::size_t i = 0; i < eligible.size(); ++i) {
        eligible[i]->forecast_rank = static_cast<int>(i + 1);
        if (i > 0 && eligible[i]->pinball == eligible[i - 1]->pinball) {
            eligible[i]->pinball_tie = eligible[i - 1]->pinball_tie = true;
        }
    }

    std::stable_sort(eligible.begin(), eligible.end(), [](auto* a, auto* b) {
        return a->revenue_m != b->revenue_m ? a->revenue_m > b->revenue_m : a->team < b->team;
    });
    for (std::size_t i = 0; i < eligible.size(); ++i) {
        eligible[i]->trading_rank = static_cast<int>(i + 1);
        if (i > 0 && eligible[i]->revenue_m == eligible[i - 1]->revenue_m) {
            eligible[i]->revenue_tie = eligible[i - 1]->revenue_tie = true;
        }
    }

    std::stable_sort(eligible.begin(), eligible.end(), [](auto* a, auto* b) {
        const int sa = *a->forecast_rank + *a->trading_rank;
        const int sb = *b->forecast_rank + *b->trading_rank;
        return sa != sb ? sa < sb : *a->forecast_rank < *b->forecast_rank;
    });
    for (std::size_t i = 0; i < eligible.size(); ++i) {
        eligible[i]->combined_rank = static_cast<int>(i + 1);
    }

    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.pinball != b.pinball ? a.pinball < b.pinball : a.team < b.team;
    });
}

TeamPinball team_pinball(const TeamSeries& series, const ProductionSeries& actuals, std::optional<double> sanity_limit) {
    TeamPinball result;
    double total = 0.0;
    for (const auto& p : series.periods) {
        const auto it = actuals.find(p.period);
        if (it == actuals.end()) {
            continue;
        }
        if (sanity_limit) {
            const bool implausible = std::any_of(p.q.begin(), p.q.end(), [&](double v) {
                return !std::isfinite(v) || std::abs(v) > *sanity_limit;
            });
            if (implausible) {
                ++result.sanitized;
                continue;
            }
        }
        total += mean_pinball(p.q, it->second);
        ++result.scored;
    }
    if (result.scored == 0) {
        throw EmptyEvaluationError("team " + series.team + " has no scored periods");
    }
    result.pinball = total / static_cast<double>(result.scored);
    return result;
}

std::vector<LeaderboardRow> build_leaderboard(std::span<const TeamRecord> teams, const MarketData& market,
                                              MarketImpactCoefficient k, const LeaderboardRules& rules,
                                              const ScoringOptions& scoring) {
    std::set<std::string> names;
    for (const auto& t : teams) {
        if (!names.insert(t.name).second) {
            throw InvalidInputError("duplicate team name '" + t.name + "'");
        }
    }

    std::optional<std::vector<Period>> reference_periods;
    std::string reference_team;
    std::vector<LeaderboardRow> rows;
    rows.reserve(teams.size());
    for (const auto& t : teams) {
        std::vector<Period> scored;
        for (const auto& p : t.series.periods) {
            if (market.production.count(p.period) != 0 && market.prices.count(p.period) != 0) {
                scored.push_back(p.period);
            }
        }
        if (!reference_periods) {
            reference_periods = scored;
            reference_team = t.name;
        } else if (scored != *reference_periods) {
            throw DataError("teams " + reference_team + " and " + t.name + " are scored over different periods");
        }

        const bool sanitize = scoring.sanitize_team && *scoring.sanitize_team == t.name;
        const TeamPinball pinball =
            team_pinball(t.series, market.production, sanitize ? std::optional{scoring.sanity_limit} : std::nullopt);
        const TradeLedger ledger = settle_team(t.series, market, k);

        LeaderboardRow row;
        row.team = t.name;
        row.pinball = pinball.pinball;
        row.revenue_m = ledger.total_revenue / 1e6;
        row.eligible = is_eligible(t, rules);
        row.report = t.report_submitted;
        row.missed = t.missed_submissions;
        row.student = t.student;
        row.scored_periods = pinball.scored;
        row.sanitized_periods = pinball.sanitized;
        rows.push_back(std::move(row));
    }
    rank_leaderboard(rows);
    return rows;
}

}  // namespace heftcom
