"""
Day-by-day liquidation scheduling under daily trading limits, and the
analytics derived from a schedule: liquidation ratio, liquidation time,
the daily liquidation profile and the illiquid-asset measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import DomainError, Portfolio, RedemptionPortfolio, tna, weights

#: Default scheduling horizon: one trading year.
MAX_DAYS_DEFAULT = 260


class Unreachable:
    """Sentinel for a liquidation/liquidity time that is never reached."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNREACHABLE"


#: Singleton returned instead of a day count when a threshold is never met.
UNREACHABLE = Unreachable()


@dataclass(frozen=True, eq=False)
class LiquidationSchedule:
    """Shares sold per security per trading day.

    ``sold[h-1, i]`` is the quantity of security i sold on day h. The schedule
    stops at full liquidation or at ``max_days``, whichever comes first.
    ``stuck`` flags securities that can never finish (zero daily limit with a
    positive target).
    """

    portfolio: Portfolio
    target: RedemptionPortfolio
    sold: np.ndarray
    max_days: int
    exhausted: bool
    stuck: tuple

    @property
    def horizon(self) -> int:
        """Number of scheduled trading days."""
        return self.sold.shape[0]

    def cumulative(self, h: Optional[int] = None) -> np.ndarray:
        """Total shares sold per security up to and including day h."""
        if self.horizon == 0:
            return np.zeros(self.portfolio.n)
        h = self.horizon if h is None else min(h, self.horizon)
        if h <= 0:
            return np.zeros(self.portfolio.n)
        return self.sold[:h].sum(axis=0)

    def amount(self, h: int) -> float:
        """Cash raised after h trading days (prices frozen)."""
        return float(self.cumulative(h) @ self.portfolio.prices)


def build_schedule(
    portfolio: Portfolio,
    redemption: RedemptionPortfolio,
    max_days: int = MAX_DAYS_DEFAULT,
    limits: Optional[np.ndarray] = None,
) -> LiquidationSchedule:
    """Greedy liquidation: each day sell min(remaining, daily limit) of each security.

    Args:
        portfolio: Fund holdings with daily limits.
        redemption: Target quantities, must not exceed the holdings.
        max_days: Truncation horizon (>= 1).
        limits: Optional per-security daily limits overriding the portfolio's
            (used by stressed-volume scenarios).

    Raises:
        DomainError: if the target exceeds the holdings or max_days < 1.
    """
    if max_days < 1:
        raise DomainError("max_days must be at least 1")
    q = redemption.quantities
    if len(q) != portfolio.n:
        raise DomainError("redemption portfolio does not match portfolio size")
    if np.any(q > portfolio.shares * (1 + 1e-12) + 1e-9):
        raise DomainError("cannot liquidate more shares than held")
    cap = portfolio.daily_limits if limits is None else np.asarray(limits, dtype=float)
    if np.any(cap < 0):
        raise DomainError("daily limits must be non-negative")

    stuck = tuple(portfolio.ids[i] for i in range(portfolio.n) if q[i] > 0 and cap[i] == 0)
    sellable = q.copy()
    sellable[cap == 0] = 0.0

    rows = []
    remaining = sellable.copy()
    while remaining.sum() > 1e-9 and len(rows) < max_days:
        today = np.minimum(remaining, cap)
        rows.append(today)
        remaining = remaining - today
    sold = np.array(rows) if rows else np.zeros((0, portfolio.n))
    exhausted = bool(remaining.sum() <= 1e-9) and not stuck
    return LiquidationSchedule(
        portfolio=portfolio, target=redemption, sold=sold,
        max_days=max_days, exhausted=exhausted, stuck=stuck,
    )


def liquidation_ratio(schedule: LiquidationSchedule, h: int) -> float:
    """Proportion of the redemption portfolio's value liquidated after h days."""
    total = schedule.target.value(schedule.portfolio)
    if total <= 0:
        raise DomainError("liquidation ratio undefined for a zero-value redemption")
    return schedule.amount(h) / total


def liquidation_time(schedule: LiquidationSchedule, p: float):
    """Smallest h with liquidation ratio >= p, or UNREACHABLE within max_days."""
    if not 0.0 < p <= 1.0:
        raise DomainError("threshold p must lie in (0, 1]")
    total = schedule.target.value(schedule.portfolio)
    if total <= 0:
        raise DomainError("liquidation time undefined for a zero-value redemption")
    target = p * total
    cum = 0.0
    for h in range(schedule.horizon):
        cum += float(schedule.sold[h] @ schedule.portfolio.prices)
        if cum >= target * (1 - 1e-12):
            return h + 1
    return UNREACHABLE


def _per_day_weight(portfolio: Portfolio) -> Tuple[np.ndarray, np.ndarray]:
    """psi_i = weight sellable per day; tau_i = days to unwind the position."""
    w = weights(portfolio)
    cap = portfolio.daily_limits
    psi = cap * portfolio.prices / tna(portfolio)
    with np.errstate(divide="ignore"):
        tau = np.where(cap > 0, portfolio.shares / np.where(cap > 0, cap, 1.0), np.inf)
    return psi, tau


def daily_liquidation_profile(portfolio: Portfolio, max_days: int = MAX_DAYS_DEFAULT):
    """Daily liquidation weights W(h) for a full waterfall-style unwind.

    Computed in closed form from the per-day sellable weight of each asset:
    W(h) = sum_i [min(h * psi_i, w_i) - min((h-1) * psi_i, w_i)].

    Returns:
        (W, residual): W is indexed by day (W[0] is day 1) and sums to
        1 - residual; residual is the weight of securities with a zero daily
        limit, which never liquidate.
    """
    w = weights(portfolio)
    psi, tau = _per_day_weight(portfolio)
    liquid = psi > 0
    residual = float(w[~liquid].sum())
    finite_tau = tau[liquid]
    horizon = int(min(max_days, math.ceil(finite_tau.max()))) if finite_tau.size else 0
    h = np.arange(0, horizon + 1).reshape(-1, 1)
    cum = np.minimum(h * psi[liquid], w[liquid]).sum(axis=1)
    profile = np.diff(cum)
    return profile, residual


def illiquid_assets(portfolio: Portfolio, w_star: float,
                    max_days: int = 10_000) -> Tuple[int, float]:
    """Illiquid amount: weight still unsold when daily liquidation drops below w_star.

    Returns (h_star, illiquid_fraction) where h_star is the first day with
    W(h) <= w_star and the fraction is 1 - sum_i min((h_star - 1) * psi_i, w_i).
    The default horizon is generous: the daily profile is non-increasing, so
    the threshold day always exists once every unwind time is covered.
    """
    if not 0.0 < w_star < 1.0:
        raise DomainError("w_star must lie in (0, 1)")
    w = weights(portfolio)
    psi, _ = _per_day_weight(portfolio)
    profile, residual = daily_liquidation_profile(portfolio, max_days=max_days)
    h_star = None
    for h in range(1, len(profile) + 1):
        if profile[h - 1] <= w_star + 1e-15:
            h_star = h
            break
    if h_star is None:
        # beyond the computed profile the daily liquidation is 0 (or the
        # residual of stuck assets), so the threshold is met right after it
        h_star = len(profile) + 1
    unsold = 1.0 - float(np.minimum((h_star - 1) * psi, w).sum())
    return h_star, unsold
