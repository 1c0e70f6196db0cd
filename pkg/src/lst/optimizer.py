"""
Mixed liquidation policies: transaction-cost evaluation under the two-regime
square-root/linear unit cost, tracking risk for equity and bond portfolios,
and the constrained policy optimizer trading cost against tracking risk and
liquidation shortfall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import optimize

from .core import (
    TRADING_DAYS_PER_YEAR,
    DomainError,
    Portfolio,
    RedemptionPortfolio,
    RedemptionShock,
    tna,
    weight_distortion,
)
from .liquidation import LiquidationSchedule, build_schedule


# =============================================================================
# TRANSACTION COSTS
# =============================================================================

@dataclass(frozen=True)
class CostModel:
    """Unit transaction cost of trading a participation x = quantity / volume.

    c(x) = spread + beta_impact * sigma_daily * impact(x) with the impact
    shape selected by ``regime``:

    * ``sqrt_linear`` (default): sqrt(x) up to the knee, then the linear
      continuation sqrt(knee) * x / knee — the square-root/linear two-regime
      shape that market-impact calibrations produce for stressed sizes;
    * ``sqrt``: the single-regime square-root form at every size.

    A ``custom_impact`` callable (x -> impact multiplier, before beta and
    sigma) overrides both. Participations above ``participation_cap`` are not
    tradeable within one day.
    """

    beta_impact: float = 0.4
    knee: float = 0.05
    participation_cap: float = 0.10
    regime: str = "sqrt_linear"
    trading_days: int = TRADING_DAYS_PER_YEAR
    custom_impact: Optional[Callable[[float], float]] = None

    def __post_init__(self) -> None:
        if self.beta_impact < 0:
            raise DomainError("impact coefficient must be non-negative")
        if not 0.0 < self.knee <= self.participation_cap <= 1.0:
            raise DomainError("need 0 < knee <= participation_cap <= 1")
        if self.regime not in ("sqrt", "sqrt_linear"):
            raise DomainError(f"unknown cost regime {self.regime!r}")

    def impact_shape(self, x: np.ndarray) -> np.ndarray:
        """Size-dependent impact multiplier before beta and volatility."""
        x = np.asarray(x, dtype=float)
        if self.custom_impact is not None:
            return np.vectorize(self.custom_impact, otypes=[float])(x)
        root = np.sqrt(np.maximum(x, 0.0))
        if self.regime == "sqrt":
            return root
        knee_root = math.sqrt(self.knee)
        return np.where(x <= self.knee, root, knee_root * x / self.knee)

    def unit_cost(self, x: np.ndarray, spread: np.ndarray, annual_vol: np.ndarray) -> np.ndarray:
        """Unit cost c(x) for given spreads and annualized volatilities."""
        daily_vol = np.asarray(annual_vol, dtype=float) / math.sqrt(self.trading_days)
        return np.asarray(spread, dtype=float) + self.beta_impact * daily_vol * self.impact_shape(x)


@dataclass(frozen=True)
class TransactionCost:
    """Transaction cost of a liquidation, as fractions of the liquidated value."""

    total: float
    spread_part: float
    impact_part: float


def transaction_cost(
    portfolio: Portfolio,
    cost_model: CostModel,
    schedule: LiquidationSchedule,
) -> TransactionCost:
    """Total cost of executing a liquidation schedule.

    Sums q_i(h) * P_i * c_i(q_i(h) / v_i) over securities and days, split
    into the bid-ask and market-impact components, and normalizes by the
    value of the liquidated portfolio (costs are in fractions of the traded
    amount, matching how liquidation costs are usually quoted).
    """
    value = schedule.target.value(portfolio)
    if value <= 0:
        return TransactionCost(total=0.0, spread_part=0.0, impact_part=0.0)
    volumes = portfolio.daily_volumes
    spread_cost = 0.0
    impact_cost = 0.0
    cap = cost_model.participation_cap
    for day in schedule.sold:
        active = day > 0
        if not active.any():
            continue
        if np.any((volumes <= 0) & active):
            bad = [portfolio.ids[i] for i in np.nonzero((volumes <= 0) & active)[0]]
            raise DomainError(f"securities {bad} trade with zero daily volume")
        x = np.where(volumes > 0, day / np.where(volumes > 0, volumes, 1.0), 0.0)
        if np.any(x > cap * (1 + 1e-9)):
            bad = [portfolio.ids[i] for i in np.nonzero(x > cap * (1 + 1e-9))[0]]
            raise DomainError(f"participation above the one-day cap for {bad}")
        notional = day * portfolio.prices
        spread_cost += float((notional * portfolio.spreads)[active].sum())
        daily_vol = portfolio.volatilities / math.sqrt(cost_model.trading_days)
        impact = cost_model.beta_impact * daily_vol * cost_model.impact_shape(x)
        impact_cost += float((notional * impact)[active].sum())
    return TransactionCost(
        total=(spread_cost + impact_cost) / value,
        spread_part=spread_cost / value,
        impact_part=impact_cost / value,
    )


# =============================================================================
# TRACKING RISK
# =============================================================================

def tracking_risk_equity(portfolio: Portfolio, redemption: RedemptionPortfolio) -> float:
    """Tracking-error volatility of the post-liquidation weights.

    sqrt(dw' Sigma dw) with Sigma built from annualized volatilities and the
    portfolio's correlation matrix (which must be present).
    """
    rho = portfolio.require_correlation()
    delta = weight_distortion(portfolio, redemption).delta
    vols = portfolio.volatilities
    cov = np.outer(vols, vols) * rho
    return float(math.sqrt(max(delta @ cov @ delta, 0.0)))


@dataclass(frozen=True)
class BondRiskSpec:
    """Sector / maturity-bucket / duration / spread data for bond tracking risk.

    Every bond maps to exactly one sector and one maturity bucket;
    ``modified_duration`` is in years and ``dts`` is duration-times-spread.
    """

    sectors: tuple
    buckets: tuple
    modified_duration: tuple
    dts: tuple

    def __post_init__(self) -> None:
        n = len(self.sectors)
        if not (len(self.buckets) == len(self.modified_duration) == len(self.dts) == n):
            raise DomainError("bond risk spec fields must have equal length")

    def validate_for(self, portfolio: Portfolio) -> None:
        if len(self.sectors) != portfolio.n:
            raise DomainError("bond risk spec does not cover every bond")
        if any(s is None for s in self.sectors) or any(b is None for b in self.buckets):
            raise DomainError("every bond needs a sector and a maturity bucket")


def tracking_risk_bond(
    portfolio: Portfolio,
    redemption: RedemptionPortfolio,
    spec: BondRiskSpec,
) -> float:
    """Bond tracking risk: sector weight gap + per-bucket duration gap + DTS gap.

    Sums |sum of dw| within each sector, |sum of dw * MD| within each
    sector-bucket cell, and |sum of dw * DTS| within each sector. Signed
    distortions net inside each absolute value.
    """
    spec.validate_for(portfolio)
    delta = weight_distortion(portfolio, redemption).delta
    md = np.asarray(spec.modified_duration, dtype=float)
    dts = np.asarray(spec.dts, dtype=float)

    risk_w = 0.0
    risk_md = 0.0
    risk_dts = 0.0
    for sector in sorted(set(spec.sectors), key=str):
        in_sector = np.array([s == sector for s in spec.sectors])
        risk_w += abs(float(delta[in_sector].sum()))
        risk_dts += abs(float((delta * dts)[in_sector].sum()))
        for bucket in sorted({b for b, s in zip(spec.buckets, spec.sectors) if s == sector}, key=str):
            cell = in_sector & np.array([b == bucket for b in spec.buckets])
            risk_md += abs(float((delta * md)[cell].sum()))
    return risk_w + risk_md + risk_dts


# =============================================================================
# POLICY EVALUATION AND OPTIMIZATION
# =============================================================================

@dataclass(frozen=True)
class PolicyEvaluation:
    """Cost / tracking-risk / shortfall summary of one liquidation portfolio."""

    tracking_risk: float
    tc: float
    tc_spread: float
    tc_impact: float
    shortfall: float  # 1 - liquidation ratio at the evaluation horizon

    @property
    def components_consistent(self) -> bool:
        return abs(self.tc - (self.tc_spread + self.tc_impact)) < 1e-12


def evaluate_policy(
    portfolio: Portfolio,
    cost_model: CostModel,
    redemption: RedemptionPortfolio,
    horizon: int = 1,
    bond_spec: Optional[BondRiskSpec] = None,
) -> PolicyEvaluation:
    """Evaluate a liquidation portfolio: tracking risk, cost split, shortfall."""
    schedule = build_schedule(portfolio, redemption)
    cost = transaction_cost(portfolio, cost_model, schedule)
    if bond_spec is not None:
        tr = tracking_risk_bond(portfolio, redemption, bond_spec)
    else:
        tr = tracking_risk_equity(portfolio, redemption)
    value = redemption.value(portfolio)
    shortfall = 1.0 - schedule.amount(horizon) / value
    return PolicyEvaluation(
        tracking_risk=tr,
        tc=cost.total,
        tc_spread=cost.spread_part,
        tc_impact=cost.impact_part,
        shortfall=max(shortfall, 0.0),
    )


@dataclass(frozen=True)
class InfeasiblePolicy:
    """Returned when no liquidation portfolio satisfies the constraint set."""

    binding_constraint: str
    message: str


@dataclass(frozen=True)
class OptimalPolicy:
    redemption: RedemptionPortfolio
    evaluation: PolicyEvaluation


def optimize_policy(
    portfolio: Portfolio,
    cost_model: CostModel,
    shock: RedemptionShock,
    tr_max: float,
    ls_max: float,
    horizon: int = 1,
    bond_spec: Optional[BondRiskSpec] = None,
) -> Union[OptimalPolicy, InfeasiblePolicy]:
    """Minimize transaction cost subject to tracking-risk and shortfall caps.

    minimize TC(q) s.t. TR(q) <= tr_max, 1 - LR(q; horizon) <= ls_max,
    value(q) = shock amount, 0 <= q <= holdings.

    Runs SLSQP from several deterministic starting points (pro-rata, a
    most-liquid-first fill, and their midpoint); the value-matching equality
    is kept feasible by renormalizing each start onto the budget plane. The
    pro-rata slice always satisfies the tracking constraint, so infeasibility
    can only come from the shortfall cap; that case is detected against the
    fastest-liquidating portfolio and reported as a typed outcome.
    """
    if shock.amount <= 0:
        raise DomainError("redemption shock must be positive")
    total = tna(portfolio)
    if shock.amount > total:
        return InfeasiblePolicy("budget", "shock exceeds total net assets")
    prices = portfolio.prices
    shares = portfolio.shares
    budget = shock.amount

    def tr_of(q: np.ndarray) -> float:
        rp = RedemptionPortfolio(quantities=q)
        if bond_spec is not None:
            return tracking_risk_bond(portfolio, rp, bond_spec)
        return tracking_risk_equity(portfolio, rp)

    def ls_of(q: np.ndarray) -> float:
        rp = RedemptionPortfolio(quantities=q)
        schedule = build_schedule(portfolio, rp)
        return 1.0 - schedule.amount(horizon) / budget

    def tc_of(q: np.ndarray) -> float:
        rp = RedemptionPortfolio(quantities=q)
        schedule = build_schedule(portfolio, rp)
        return transaction_cost(portfolio, cost_model, schedule).total

    # Feasibility of the shortfall cap: nothing liquidates faster than filling
    # the most liquid assets first up to their horizon capacity.
    speed_caps = np.minimum(shares, horizon * portfolio.daily_limits)
    fastest = _greedy_fill(portfolio, speed_caps, budget)
    if fastest is None or ls_of(fastest) > ls_max + 1e-9:
        return InfeasiblePolicy(
            "shortfall",
            f"no portfolio of value {budget:.6g} liquidates within the cap "
            f"ls_max={ls_max} over {horizon} day(s)",
        )

    pro_rata = (budget / total) * shares
    starts = [pro_rata]
    greedy = _greedy_fill(portfolio, shares, budget, by_cost=(portfolio, cost_model))
    if greedy is not None:
        starts.append(greedy)
        starts.append(0.5 * pro_rata + 0.5 * greedy)
    if fastest is not None:
        starts.append(fastest)
        starts.append(0.5 * pro_rata + 0.5 * fastest)

    def clip_to_budget(q: np.ndarray) -> np.ndarray:
        q = np.clip(q, 0.0, shares)
        value = q @ prices
        if value <= 0:
            return pro_rata.copy()
        scaled = q * (budget / value)
        # renormalization may push past the holdings; bleed the excess into
        # a final exact projection step
        for _ in range(50):
            over = scaled > shares
            if not over.any():
                break
            excess = float(((scaled - shares)[over] * prices[over]).sum())
            scaled = np.minimum(scaled, shares)
            room = (shares - scaled) * prices
            space = float(room.sum())
            if space <= 0 or excess <= 0:
                break
            scaled = scaled + (room / space) * excess / prices
        return np.clip(scaled, 0.0, shares)

    constraints = [{"type": "eq", "fun": lambda q: (q @ prices - budget) / budget}]
    if np.isfinite(tr_max):
        constraints.append(
            {"type": "ineq", "fun": lambda q: tr_max - tr_of(np.clip(q, 0.0, shares))})
    if ls_max < 1.0:
        constraints.append(
            {"type": "ineq", "fun": lambda q: ls_max - ls_of(np.clip(q, 0.0, shares))})
    bounds = [(0.0, float(s)) for s in shares]

    best_q = None
    best_tc = math.inf
    for start in starts:
        start = clip_to_budget(np.asarray(start, dtype=float))
        try:
            res = optimize.minimize(
                lambda q: tc_of(np.clip(q, 0.0, shares)),
                x0=start,
                method="SLSQP",
                bounds=bounds,
                constraints=constraints,
                options={"maxiter": 300, "ftol": 1e-8},
            )
        except DomainError:
            continue
        for candidate in (res.x, start):
            q = clip_to_budget(np.asarray(candidate, dtype=float))
            if abs(q @ prices - budget) > 1e-6 * budget:
                continue
            if tr_of(q) > tr_max + 1e-9 or ls_of(q) > ls_max + 1e-9:
                continue
            cost = tc_of(q)
            if cost < best_tc:
                best_tc = cost
                best_q = q
    if best_q is None:
        return InfeasiblePolicy(
            "tracking-risk",
            "no evaluated portfolio satisfied both the tracking and shortfall caps",
        )
    redemption = RedemptionPortfolio(quantities=best_q)
    return OptimalPolicy(
        redemption=redemption,
        evaluation=evaluate_policy(portfolio, cost_model, redemption, horizon, bond_spec),
    )


def _greedy_fill(portfolio: Portfolio, caps: np.ndarray, budget: float, by_cost=None):
    """Fill a budget from per-security capacity, cheapest or as-listed first."""
    order = np.arange(portfolio.n)
    if by_cost is not None:
        p, cm = by_cost
        vols = np.where(portfolio.daily_volumes > 0, portfolio.daily_volumes, np.inf)
        x_cap = np.minimum(portfolio.daily_limits / vols, cm.participation_cap)
        marginal = cm.unit_cost(x_cap, p.spreads, p.volatilities)
        order = np.argsort(marginal, kind="stable")
    q = np.zeros(portfolio.n)
    remaining = budget
    for i in order:
        if remaining <= 0:
            break
        take_value = min(remaining, caps[i] * portfolio.prices[i])
        q[i] = take_value / portfolio.prices[i]
        remaining -= take_value
    if remaining > 1e-9 * max(budget, 1.0):
        return None
    return q
