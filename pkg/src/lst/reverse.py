"""
Reverse stress testing: the redemption rate above which, and the volume
multiplier below which, the redemption coverage ratio breaches its floor.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .core import DomainError, Portfolio, RedemptionPortfolio, tna, weights
from .liquidation import build_schedule
from .rcr import pro_rata_portfolio

BISECTION_TOL = 1e-6
BISECTION_MAX_ITER = 200


@dataclass(frozen=True)
class LiabilityRstResult:
    """Liability reverse-stress scenario for one horizon."""

    tau_h: int
    rcr_floor: float
    amount: float      # shock in currency above which the floor is breached
    rate: float        # same, as a fraction of net assets
    feasible: bool     # rate <= 1, i.e. the breach is reachable by redemptions

    def __iter__(self):
        return iter((self.amount, self.rate))


class AssetRstFailure(Enum):
    """Why no volume-multiplier threshold exists."""

    ALREADY_BELOW_FLOOR = "coverage is at or below the floor even without a volume shock"
    FLOOR_UNREACHABLE = "coverage stays above the floor for any positive multiplier"


@dataclass(frozen=True)
class AssetRstNoSolution:
    tau_h: int
    rcr_floor: float
    reason: AssetRstFailure


def stressed_rcr(
    portfolio: Portfolio,
    redemption: RedemptionPortfolio,
    shock_amount: float,
    tau_h: int,
    volume_multiplier: float = 1.0,
) -> float:
    """RCR(tau_h) with every daily limit scaled by the volume multiplier."""
    limits = volume_multiplier * portfolio.daily_limits
    schedule = build_schedule(portfolio, redemption, max_days=tau_h, limits=limits)
    return schedule.amount(tau_h) / shock_amount


def liability_rst(
    portfolio: Portfolio,
    alpha: np.ndarray,
    rcr_floor: float,
    tau_h: int,
) -> LiabilityRstResult:
    """Redemption shock above which RCR(tau_h) falls below the floor.

    ``alpha[i]`` is the proportion of security i that remains saleable in the
    stress; the liquidation portfolio is alpha * holdings. The scenario is
    A(tau_h) / floor; it is flagged infeasible when that exceeds net assets
    (no redemption rate <= 1 breaches the floor, which happens whenever the
    floor is below the stressed saleable weight of the fund).
    """
    if rcr_floor <= 0:
        raise DomainError("RCR floor must be positive")
    if tau_h < 1:
        raise DomainError("tau_h must be at least 1")
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (portfolio.n,):
        raise DomainError("alpha must give one proportion per security")
    if np.any(alpha < 0) or np.any(alpha > 1):
        raise DomainError("alpha proportions must lie in [0, 1]")
    redemption = RedemptionPortfolio(quantities=alpha * portfolio.shares)
    schedule = build_schedule(portfolio, redemption, max_days=tau_h)
    amount = schedule.amount(tau_h) / rcr_floor
    rate = amount / tna(portfolio)
    return LiabilityRstResult(
        tau_h=tau_h, rcr_floor=rcr_floor, amount=amount, rate=rate, feasible=rate <= 1.0
    )


def liability_rst_feasible(portfolio: Portfolio, alpha: np.ndarray, rcr_floor: float) -> bool:
    """Whether some redemption rate <= 1 breaches the floor at long horizons.

    Holds exactly when the floor is at least the stressed saleable weight
    sum(alpha_i * w_i).
    """
    alpha = np.asarray(alpha, dtype=float)
    return rcr_floor >= float(alpha @ weights(portfolio)) - 1e-12


def asset_rst(
    portfolio: Portfolio,
    standard_rate: float,
    rcr_floor: float,
    tau_h: int,
    tol: float = BISECTION_TOL,
) -> Union[float, AssetRstNoSolution]:
    """Volume multiplier below which RCR(tau_h) falls below the floor.

    The liquidation portfolio is the pro-rata slice at ``standard_rate`` and
    every daily limit scales with the multiplier. Coverage is non-decreasing
    in the multiplier, so the threshold is found by bisection; daily limits
    stay real-valued (no share rounding).

    Returns:
        The multiplier in (0, 1), or a typed no-solution outcome when the
        unstressed coverage is already at/below the floor, or when the floor
        cannot be reached by shrinking volumes.
    """
    if not 0.0 < standard_rate <= 1.0:
        raise DomainError("standard redemption rate must lie in (0, 1]")
    if rcr_floor <= 0:
        raise DomainError("RCR floor must be positive")
    if tau_h < 1:
        raise DomainError("tau_h must be at least 1")
    redemption = pro_rata_portfolio(portfolio, standard_rate)
    shock_amount = standard_rate * tna(portfolio)

    top = stressed_rcr(portfolio, redemption, shock_amount, tau_h, 1.0)
    if top <= rcr_floor:
        return AssetRstNoSolution(tau_h=tau_h, rcr_floor=rcr_floor,
                                  reason=AssetRstFailure.ALREADY_BELOW_FLOOR)
    lo, hi = 0.0, 1.0
    bottom = stressed_rcr(portfolio, redemption, shock_amount, tau_h, tol)
    if bottom >= rcr_floor:
        return AssetRstNoSolution(tau_h=tau_h, rcr_floor=rcr_floor,
                                  reason=AssetRstFailure.FLOOR_UNREACHABLE)
    for _ in range(BISECTION_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if stressed_rcr(portfolio, redemption, shock_amount, tau_h, mid) <= rcr_floor:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)
