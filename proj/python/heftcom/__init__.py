"""Scoring, settlement and bidding tools for the hybrid forecasting and trading competition."""

from heftcom._core import (
    Error,
    LEVELS,
    LeaderboardRow,
    QuantileRegressionFit,
    RevenueRisk,
    SkillValueFit,
    aggregate_hybrid,
    clip_to_capacity,
    fit_quantile_regression,
    max_revenue,
    mean_pinball,
    optimal_bid,
    pinball_loss,
    rank_leaderboard,
    revenue_risk,
    run_command,
    settle_revenue,
    skill_value_regression,
    sort_quantiles,
)

__all__ = [
    "Error",
    "LEVELS",
    "LeaderboardRow",
    "QuantileRegressionFit",
    "RevenueRisk",
    "SkillValueFit",
    "aggregate_hybrid",
    "clip_to_capacity",
    "fit_quantile_regression",
    "max_revenue",
    "mean_pinball",
    "optimal_bid",
    "pinball_loss",
    "rank_leaderboard",
    "revenue_risk",
    "run_command",
    "settle_revenue",
    "skill_value_regression",
    "sort_quantiles",
]
