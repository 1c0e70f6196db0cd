"""
Command-line front end: scenario ingestion, orchestration and deterministic
CSV/JSON emission, including the golden-table regression runner.

Exit codes: 0 on success, 1 when a computation reports a typed infeasibility
(no-solution reverse stress, infeasible policy constraints), 2 on config or
validation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .core import DomainError, Portfolio, RedemptionShock, load_portfolio
from .buffer import (
    BufferCostParams,
    BufferMarketParams,
    break_even_premium,
    net_buffer_cost,
    optimal_cash_buffer,
)
from .hqla import SpecificRiskParams, ccf_parametric, load_buckets, rcr_hqla
from .optimizer import CostModel, InfeasiblePolicy, optimize_policy
from .rcr import optimal_pro_rata, pro_rata_portfolio, rcr_report, waterfall_portfolio
from .reverse import AssetRstNoSolution, asset_rst, liability_rst
from .swing import (
    GatePolicy,
    GateRequest,
    SwingConfig,
    SwingMode,
    gate_schedule,
    swing_nav,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_CONFIG = 2


# =============================================================================
# FORMATTING AND SMALL PARSERS
# =============================================================================

def _fmt(x: float) -> str:
    """Deterministic numeric formatting: six significant digits."""
    return format(float(x), ".6g")


def _pct(x: float, raw: bool = False) -> str:
    """Percentages at two decimals (benchmark-table style) unless raw."""
    return repr(float(x)) if raw else f"{100 * x:.2f}"


def _bp(x: float, raw: bool = False) -> str:
    return repr(float(x)) if raw else f"{1e4 * x:.1f}"


def parse_rate(text: str) -> float:
    """Parse a fraction given as '0.002', '20bp' or '0.2%'."""
    t = str(text).strip().lower()
    if t.endswith("bp") or t.endswith("bps"):
        return float(t.rstrip("ps").rstrip("b")) * 1e-4
    if t.endswith("%"):
        return float(t[:-1]) / 100.0
    return float(t)


def parse_days(text: str) -> List[int]:
    """Parse a day list: '5', '1..5' or '1,3,5'."""
    t = str(text).strip()
    if ".." in t:
        lo, hi = t.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in t.split(",") if x.strip()]


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _error(report: dict, code: int) -> int:
    print(json.dumps(report, sort_keys=True), file=sys.stderr)
    return code


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill unset options from the JSON config document, flags winning."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        cfg = json.load(fh)
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def _load_portfolio_arg(args) -> Portfolio:
    if not args.portfolio:
        raise DomainError("a --portfolio file is required")
    return load_portfolio(args.portfolio, correlation_path=getattr(args, "corr", None))


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def cmd_rcr(args) -> int:
    portfolio = _load_portfolio_arg(args)
    shock_rate = parse_rate(args.shock)
    shock = RedemptionShock.from_rate(portfolio, shock_rate)
    policy = args.policy
    if policy == "prorata":
        redemption = pro_rata_portfolio(portfolio, shock_rate)
    elif policy == "optimal":
        _, redemption = optimal_pro_rata(portfolio, int(args.tau))
    elif policy == "waterfall":
        redemption = waterfall_portfolio(portfolio)
    else:
        raise DomainError(f"unknown policy {policy!r}")
    horizon = int(args.horizon) if args.horizon else max(int(args.tau), 6)
    report = rcr_report(portfolio, shock, redemption, horizon=horizon)
    header = ["h", "lr_pct", "amount", "rcr_pct", "ls_pct"]
    rows = [
        [h, _pct(report.lr[h - 1], args.raw), _fmt(report.amount[h - 1]),
         _pct(report.rcr[h - 1], args.raw), _pct(report.ls[h - 1], args.raw)]
        for h in range(1, report.horizon + 1)
    ]
    if args.out:
        write_csv(args.out, header, rows)
    else:
        sys.stdout.write(_csv_text(header, rows))
    if args.schedule_out:
        from .liquidation import build_schedule

        sched = build_schedule(portfolio, redemption)  # full unwind, not report-truncated
        cum_value = 0.0
        sched_rows = []
        for h in range(sched.horizon):
            cum_value += float(sched.sold[h] @ portfolio.prices)
            sched_rows.append([h + 1] + [_fmt(v) for v in sched.sold[h]] + [_fmt(cum_value)])
        write_csv(args.schedule_out, ["h", *portfolio.ids, "cumulative_value"], sched_rows)
    return EXIT_OK


def cmd_hqla(args) -> int:
    buckets = load_buckets(args.buckets)
    weights_arg = [float(x) for x in str(args.weights).split(",")]
    if len(weights_arg) != len(buckets):
        raise DomainError("--weights must give one weight per bucket")
    sf = None
    if args.tna_star is not None:
        sf = SpecificRiskParams(
            tna_threshold=float(args.tna_star),
            herfindahl_threshold=float(args.h_star),
            size_coefficient=float(args.xi_size),
            concentration_coefficient=float(args.xi_conc),
            cap=float(args.sf_cap),
        )
    tau = float(args.tau)
    pairs = []
    rows = []
    for weight, bucket in zip(weights_arg, buckets):
        if bucket.ccf_static is not None:
            ccf = bucket.ccf_static
        else:
            ccf = ccf_parametric(
                bucket, sf, tau,
                fund_tna=float(args.tna or 0.0),
                fund_herfindahl=float(args.herfindahl or 0.0),
                conservative=bool(args.conservative),
            )
        pairs.append((weight, ccf))
        rows.append([bucket.name, _fmt(weight), _fmt(ccf)])
    rcr, ls = rcr_hqla(pairs, parse_rate(args.shock))
    rows.append(["rcr", "", _fmt(rcr)])
    rows.append(["ls", "", _fmt(ls)])
    header = ["bucket", "weight", "value"]
    if args.out:
        write_csv(args.out, header, rows)
    else:
        sys.stdout.write(_csv_text(header, rows))
    return EXIT_OK


def _load_alpha(path) -> np.ndarray:
    """Stressed saleable proportions: one value per line, or an id,value CSV."""
    values = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                values.append(float(row[-1]))
            except ValueError:
                continue  # header line
    return np.array(values, dtype=float)


def cmd_rst(args) -> int:
    portfolio = _load_portfolio_arg(args)
    taus = parse_days(args.tau)
    floors = [parse_rate(x) for x in str(args.floor).split(",")]
    if args.mode == "liability":
        alpha = _load_alpha(args.alpha)
        header = ["tau", "floor_pct", "amount", "rate_pct", "feasible"]
        rows = []
        for tau in taus:
            for floor in floors:
                res = liability_rst(portfolio, alpha, floor, tau)
                rows.append([tau, _pct(floor, args.raw), _fmt(res.amount),
                             _pct(res.rate, args.raw), str(res.feasible).lower()])
    else:
        header = ["tau", "floor_pct", "volume_multiplier"]
        rows = []
        for tau in taus:
            for floor in floors:
                res = asset_rst(portfolio, parse_rate(args.rate_star), floor, tau)
                if isinstance(res, AssetRstNoSolution):
                    rows.append([tau, _pct(floor, args.raw), f"no-solution:{res.reason.name}"])
                else:
                    rows.append([tau, _pct(floor, args.raw), _fmt(res)])
    if args.out:
        write_csv(args.out, header, rows)
    else:
        sys.stdout.write(_csv_text(header, rows))
    if args.mode == "asset" and any(str(r[-1]).startswith("no-solution") for r in rows):
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_optimize(args) -> int:
    portfolio = _load_portfolio_arg(args)
    shock = RedemptionShock.from_rate(portfolio, parse_rate(args.shock))
    cost_model = CostModel(
        beta_impact=float(args.impact),
        knee=parse_rate(args.knee),
        participation_cap=parse_rate(args.cap),
        regime=args.regime,
    )
    result = optimize_policy(
        portfolio, cost_model, shock,
        tr_max=parse_rate(args.tr_max),
        ls_max=parse_rate(args.ls_max),
        horizon=int(args.h),
    )
    if isinstance(result, InfeasiblePolicy):
        return _error(
            {"error": "infeasible-policy", "binding": result.binding_constraint,
             "detail": result.message},
            EXIT_INFEASIBLE,
        )
    ev = result.evaluation
    header = ["field", "value"]
    rows = [[sid, _fmt(qty)] for sid, qty in zip(portfolio.ids, result.redemption.quantities)]
    rows += [
        ["tracking_risk_bp", _bp(ev.tracking_risk, args.raw)],
        ["tc_bp", _bp(ev.tc, args.raw)],
        ["tc_spread_bp", _bp(ev.tc_spread, args.raw)],
        ["tc_impact_bp", _bp(ev.tc_impact, args.raw)],
        ["shortfall_pct", _pct(ev.shortfall, args.raw)],
    ]
    if args.out:
        write_csv(args.out, header, rows)
    else:
        sys.stdout.write(_csv_text(header, rows))
    return EXIT_OK


def cmd_buffer(args) -> int:
    market = BufferMarketParams(
        mu_asset=float(args.mu_asset),
        mu_cash=float(args.mu_cash),
        sigma_asset=float(args.sigma_asset),
        sigma_cash=float(args.sigma_cash),
        rho=float(args.rho),
        te_aversion=float(getattr(args, "lambda")),
    )
    params = BufferCostParams(
        spread=parse_rate(args.spread),
        cash_cost=parse_rate(args.cash_cost),
        beta_impact=float(args.impact),
        sigma=float(args.sigma if args.sigma is not None else args.sigma_asset),
        x_plus=parse_rate(args.xplus),
        eta=float(args.eta),
    )
    w_star = optimal_cash_buffer(market, params)
    print(f"w_star,{_fmt(w_star)}")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        grid = np.linspace(0.0, 1.0, int(args.curve_points))
        write_csv(
            out / "nbc_curve.csv", ["w", "nbc"],
            [[_fmt(w), _fmt(net_buffer_cost(market, params, float(w)))] for w in grid],
        )
        write_csv(
            out / "break_even_curve.csv", ["w", "premium"],
            [[_fmt(w), _fmt(break_even_premium(market, params, float(w)))] for w in grid],
        )
    return EXIT_OK


def cmd_swing(args) -> int:
    from .swing import FlowEvent, FundState, adl_fees, AdlRule

    state = FundState(nav=float(args.nav), units=float(args.units))
    subscribed = float(args.sub or 0.0)
    redeemed = float(args.red or 0.0)
    if args.flow is not None:
        net = float(args.flow)
        subscribed, redeemed = (net, 0.0) if net >= 0 else (0.0, -net)
    event = FlowEvent(subscribed=subscribed, redeemed=redeemed,
                      asset_return=float(args.asset_return), tc=float(args.tc))
    config = SwingConfig(
        mode=SwingMode(args.mode),
        threshold=parse_rate(args.threshold),
        factor=parse_rate(args.factor),
        product=parse_rate(args.product),
        penalty=float(args.gamma),
    )
    result = swing_nav(state, event, config)
    rows = [["nav_gross", _fmt(result.nav_gross)], ["activated", str(result.activated).lower()]]
    if result.nav_swing is not None:
        rows.append(["nav_swing", _fmt(result.nav_swing)])
    if result.nav_ask is not None:
        rows.append(["nav_ask", _fmt(result.nav_ask)])
        rows.append(["nav_bid", _fmt(result.nav_bid)])
    if args.adl:
        fees = adl_fees(subscribed, redeemed, event.tc, AdlRule(args.adl))
        rows.append(["adl_entry", _fmt(fees.entry) if fees.entry is not None else "undefined"])
        rows.append(["adl_exit", _fmt(fees.exit) if fees.exit is not None else "undefined"])
    sys.stdout.write(_csv_text(["field", "value"], rows))
    return EXIT_OK


def cmd_gate(args) -> int:
    requests: List[GateRequest] = []
    with open(args.requests, newline="") as fh:
        for row in csv.DictReader(fh):
            requests.append(GateRequest(day=int(row["day"]), investor=row["investor"],
                                        rate=float(row["rate"])))
    fills = gate_schedule(requests, GatePolicy(daily_cap=parse_rate(args.cap)))
    header = ["day", "investor", "rate_pct", "fraction_of_request_pct"]
    rows = [[f.day, f.investor, _pct(f.rate, args.raw), _pct(f.fraction_of_request, args.raw)]
            for f in fills]
    if args.out:
        write_csv(args.out, header, rows)
    else:
        sys.stdout.write(_csv_text(header, rows))
    return EXIT_OK


# =============================================================================
# GOLDEN TABLES
# =============================================================================

def _example_portfolio() -> Portfolio:
    data = resources.files("lst") / "data"
    with resources.as_file(data / "example_fund.csv") as p, \
            resources.as_file(data / "example_fund_corr.csv") as c:
        return load_portfolio(p, correlation_path=c)


def golden_tables() -> dict:
    """Recompute every fixture table from the packaged example fund."""
    from .swing import FlowEvent, FundState, dynamic_threshold, nav_step

    portfolio = _example_portfolio()
    tables: dict = {}

    def rcr_rows(redemption, rate, horizon):
        shock = RedemptionShock.from_rate(portfolio, rate)
        report = rcr_report(portfolio, shock, redemption, horizon=horizon)
        return report, [
            [h, _pct(report.lr[h - 1]), f"{report.amount[h - 1] / 1e6:.3f}",
             _pct(report.rcr[h - 1]), _pct(report.ls[h - 1])]
            for h in range(1, horizon + 1)
        ]

    header = ["h", "lr_pct", "amount_mn", "rcr_pct", "ls_pct"]
    _, rows = rcr_rows(pro_rata_portfolio(portfolio, 0.20), 0.20, 6)
    tables["rcr_prorata"] = (header, rows)

    opt_rows = []
    for tau in range(1, 6):
        phi, q_star = optimal_pro_rata(portfolio, tau)
        shock = RedemptionShock.from_rate(portfolio, 0.20)
        report = rcr_report(portfolio, shock, q_star, horizon=tau)
        for h in range(1, tau + 1):
            opt_rows.append([tau, _pct(phi), h, _pct(report.lr[h - 1]),
                             f"{report.amount[h - 1] / 1e6:.3f}",
                             _pct(report.rcr[h - 1]), _pct(report.ls[h - 1])])
    tables["rcr_optimal"] = (["tau", "phi_pct", "h", "lr_pct", "amount_mn", "rcr_pct", "ls_pct"], opt_rows)

    wf_report, rows = rcr_rows(waterfall_portfolio(portfolio), 0.20, 6)
    tables["rcr_waterfall"] = (header, rows)

    sched = wf_report.schedule
    cum = 0.0
    srows = []
    for h in range(sched.horizon):
        cum += float(sched.sold[h] @ portfolio.prices)
        srows.append([h + 1] + [int(round(v)) for v in sched.sold[h]] + [f"{cum / 1e6:.3f}"])
    tables["waterfall_schedule"] = (["h", *portfolio.ids, "cumulative_value_mn"], srows)

    def weight_rows(report, remaining: bool, horizon: int):
        rows = []
        start = 0 if remaining else 1
        for h in range(start, horizon + 1):
            sold = report.schedule.cumulative(h)
            held = portfolio.shares - sold if remaining else sold
            value = held * portfolio.prices
            total = value.sum()
            rows.append([h] + [_pct(v / total) for v in value])
        return rows

    pr_report, _ = rcr_rows(pro_rata_portfolio(portfolio, 0.20), 0.20, 6)
    tables["weights_prorata_sold"] = (["h", *portfolio.ids], weight_rows(pr_report, False, 6))
    tables["weights_prorata_remaining"] = (["h", *portfolio.ids], weight_rows(pr_report, True, 6))
    tables["weights_waterfall_sold"] = (["h", *portfolio.ids], weight_rows(wf_report, False, 6))
    tables["weights_waterfall_remaining"] = (["h", *portfolio.ids], weight_rows(wf_report, True, 6))

    alpha = np.array([0.20, 0.30, 0.0, 0.15, 0.0, 0.0, 0.0])
    rrows = []
    for tau in range(1, 6):
        for floor in (0.25, 0.50, 0.75, 1.00):
            res = liability_rst(portfolio, alpha, floor, tau)
            rrows.append([tau, _pct(floor), f"{res.amount / 1e6:.1f}", _pct(res.rate)])
    tables["rst_liability"] = (["tau", "floor_pct", "amount_mn", "rate_pct"], rrows)

    from .hqla import HqlaBucket
    bucket = HqlaBucket("large-cap equities", selling_intensity=0.05,
                        loss_intensity=0.0625, max_drawdown=0.50)
    sf = SpecificRiskParams(tna_threshold=1e9, herfindahl_threshold=0.01,
                            size_coefficient=0.10, concentration_coefficient=0.25, cap=0.80)
    hrows = []
    for herf in (0.01, 0.04):
        for tau in (1, 5, 10, 20, 60):
            for tna_bn in (1, 5, 7, 10):
                ccf = ccf_parametric(bucket, sf, tau, fund_tna=tna_bn * 1e9, fund_herfindahl=herf)
                rcr, _ = rcr_hqla([(1.0, ccf)], 0.40)
                hrows.append([_fmt(herf), tau, tna_bn, f"{rcr:.2f}"])
    tables["hqla_grid"] = (["herfindahl", "tau", "tna_bn", "rcr"], hrows)

    cost_model = CostModel()
    from .optimizer import evaluate_policy
    from .core import RedemptionPortfolio
    policies = {
        "#1": 0.10 * portfolio.shares,
        "#2": np.array([0, 27000, 22238, 0, 0, 0, 0.0]),
        "#3": np.array([0, 0, 0, 0, 34315, 17500, 1800.0]),
        "#4": np.array([20000, 20000, 10000, 20000, 18044, 0, 0.0]),
        "#5": np.array([29404, 24004, 8016, 20020, 13846, 700, 72.0]),
    }
    mrows = []
    for name, quantities in policies.items():
        ev = evaluate_policy(portfolio, cost_model, RedemptionPortfolio(quantities=quantities), 1)
        mrows.append([name, _bp(ev.tracking_risk), _bp(ev.tc), _bp(ev.tc_spread),
                      _bp(ev.tc_impact), _pct(ev.shortfall)])
    tables["mixing_policies"] = (
        ["portfolio", "tr_bp", "tc_bp", "tc_spread_bp", "tc_impact_bp", "ls_pct"], mrows)

    market = BufferMarketParams(mu_asset=0.0)
    brows = []
    for eta in (0.5, 1.0, 2.0, 3.0):
        params = BufferCostParams(spread=20e-4, cash_cost=1e-4, beta_impact=0.4,
                                  sigma=0.20, x_plus=1.0, eta=eta)
        brows.append([_fmt(eta), _pct(optimal_cash_buffer(market, params))])
    tables["buffer_optimum"] = (["eta", "w_star_pct"], brows)

    state = FundState(nav=100.0, units=10.0)
    full = SwingConfig(mode=SwingMode.FULL)
    dual1 = SwingConfig(mode=SwingMode.DUAL, penalty=1.0)
    dual2 = SwingConfig(mode=SwingMode.DUAL, penalty=2.0)
    sub = FlowEvent(subscribed=5, asset_return=0.05, tc=30)
    red = FlowEvent(redeemed=5, asset_return=0.05, tc=30)
    mixed = FlowEvent(subscribed=10, redeemed=5, asset_return=0.05, tc=30)
    dualr1 = swing_nav(state, mixed, dual1)
    dualr2 = swing_nav(state, mixed, dual2)
    wrows = [
        ["nav_no_flow", _fmt(nav_step(state, FlowEvent(asset_return=0.05)).nav)],
        ["nav_subscription", _fmt(nav_step(state, sub).nav)],
        ["nav_redemption", _fmt(nav_step(state, red).nav)],
        ["swing_subscription", _fmt(swing_nav(state, sub, full).nav_swing)],
        ["swing_redemption", _fmt(swing_nav(state, red, full).nav_swing)],
        ["dual_ask", _fmt(dualr1.nav_ask)],
        ["dual_bid", _fmt(dualr1.nav_bid)],
        ["dual_ask_penalized", _fmt(dualr2.nav_ask)],
        ["dual_bid_penalized", _fmt(dualr2.nav_bid)],
        ["dynamic_threshold_pct", _pct(dynamic_threshold(SwingConfig(mode=SwingMode.DYNAMIC, product=2e-4), 60e-4))],
    ]
    tables["swing_examples"] = (["case", "value"], wrows)

    fills = gate_schedule(
        [GateRequest(day=0, investor="A", rate=0.05), GateRequest(day=1, investor="B", rate=0.02)],
        GatePolicy(daily_cap=0.02),
    )
    grows = [[f.day, f.investor, _pct(f.rate), _pct(f.fraction_of_request)] for f in fills]
    tables["gate_schedule"] = (["day", "investor", "rate_pct", "fraction_of_request_pct"], grows)

    return tables


def _golden_dir():
    return resources.files("lst") / "goldens"


def cmd_goldens(args) -> int:
    tables = golden_tables()
    if args.write and not args.out_dir:
        raise DomainError("--write needs an --out-dir to put the refreshed tables in")
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    failures = []
    for name, (header, rows) in sorted(tables.items()):
        text = _csv_text(header, rows)
        if out_dir:
            (out_dir / f"{name}.csv").write_text(text)
        if args.write:
            continue
        expected_file = _golden_dir() / f"{name}.csv"
        if not expected_file.is_file():
            failures.append((name, "missing expected file"))
            print(f"{name}: MISSING")
            continue
        expected = expected_file.read_text()
        if expected != text:
            failures.append((name, "diff"))
            print(f"{name}: DIFF")
        else:
            print(f"{name}: OK")
    if args.write:
        print(f"wrote {len(tables)} golden tables to {out_dir}")
        return EXIT_OK
    if failures:
        return EXIT_INFEASIBLE
    return EXIT_OK


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lst", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--raw", action="store_true", help="full-precision output")

    p = sub.add_parser("rcr", help="redemption coverage ratio table")
    add_common(p)
    p.add_argument("--portfolio")
    p.add_argument("--corr")
    p.add_argument("--shock", default="0.20")
    p.add_argument("--policy", choices=["prorata", "optimal", "waterfall"], default="prorata")
    p.add_argument("--tau", default="5", help="horizon for the optimal policy")
    p.add_argument("--horizon", help="number of report rows")
    p.add_argument("--out")
    p.add_argument("--schedule-out", dest="schedule_out")
    p.set_defaults(func=cmd_rcr)

    p = sub.add_parser("hqla", help="HQLA coverage from bucket weights")
    add_common(p)
    p.add_argument("--buckets", required=True, help="bucket JSON file")
    p.add_argument("--weights", required=True, help="comma list, one weight per bucket")
    p.add_argument("--shock", default="0.20")
    p.add_argument("--tau", default="10")
    p.add_argument("--tna", help="fund size for the specific-risk factor")
    p.add_argument("--herfindahl")
    p.add_argument("--tna-star", dest="tna_star")
    p.add_argument("--h-star", dest="h_star")
    p.add_argument("--xi-size", dest="xi_size", default="0.0")
    p.add_argument("--xi-conc", dest="xi_conc", default="0.0")
    p.add_argument("--sf-cap", dest="sf_cap", default="1.0")
    p.add_argument("--conservative", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_hqla)

    p = sub.add_parser("rst", help="reverse stress testing scenarios")
    add_common(p)
    p.add_argument("--portfolio")
    p.add_argument("--corr")
    p.add_argument("--mode", choices=["liability", "asset"], default="liability")
    p.add_argument("--alpha", help="CSV of stressed saleable proportions")
    p.add_argument("--floor", default="0.25")
    p.add_argument("--tau", default="1..5")
    p.add_argument("--rate-star", dest="rate_star", default="0.10")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rst)

    p = sub.add_parser("optimize", help="cost-minimal liquidation under caps")
    add_common(p)
    p.add_argument("--portfolio")
    p.add_argument("--corr")
    p.add_argument("--shock", default="0.10")
    p.add_argument("--tr-max", dest="tr_max", default="20bp")
    p.add_argument("--ls-max", dest="ls_max", default="0.10")
    p.add_argument("--h", default="1")
    p.add_argument("--impact", default="0.4")
    p.add_argument("--knee", default="0.05")
    p.add_argument("--cap", default="0.10")
    p.add_argument("--regime", choices=["sqrt", "sqrt_linear"], default="sqrt_linear")
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("buffer", help="optimal cash buffer and cost curves")
    add_common(p)
    p.add_argument("--mu-asset", dest="mu_asset", default="0.01")
    p.add_argument("--mu-cash", dest="mu_cash", default="0.0")
    p.add_argument("--sigma-asset", dest="sigma_asset", default="0.20")
    p.add_argument("--sigma-cash", dest="sigma_cash", default="0.0")
    p.add_argument("--rho", default="0.0")
    p.add_argument("--lambda", default="0.0")
    p.add_argument("--spread", default="20bp")
    p.add_argument("--cash-cost", dest="cash_cost", default="1bp")
    p.add_argument("--impact", default="0.4")
    p.add_argument("--sigma", help="cost-model volatility; defaults to --sigma-asset")
    p.add_argument("--xplus", default="1.0")
    p.add_argument("--eta", default="1.0")
    p.add_argument("--curve-points", dest="curve_points", default="101")
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(func=cmd_buffer)

    p = sub.add_parser("swing", help="swing pricing for one dealing day")
    add_common(p)
    p.add_argument("--nav", default="100")
    p.add_argument("--units", default="10")
    p.add_argument("--flow", help="net unit flow (sign carries direction)")
    p.add_argument("--sub", help="subscribed units (dual pricing)")
    p.add_argument("--red", help="redeemed units (dual pricing)")
    p.add_argument("--return", dest="asset_return", default="0.0")
    p.add_argument("--tc", default="0.0")
    p.add_argument("--mode", choices=[m.value for m in SwingMode], default="full")
    p.add_argument("--threshold", default="0.0")
    p.add_argument("--factor", default="0.0")
    p.add_argument("--product", default="0.0")
    p.add_argument("--gamma", default="1.0")
    p.add_argument("--adl", choices=["netted", "gross", "pro-rata"])
    p.set_defaults(func=cmd_swing)

    p = sub.add_parser("gate", help="FIFO redemption gate schedule")
    add_common(p)
    p.add_argument("--requests", required=True, help="CSV: day,investor,rate")
    p.add_argument("--cap", default="0.02")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("goldens", help="recompute fixture tables and diff them")
    add_common(p)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--write", action="store_true",
                   help="write tables without diffing (fixture refresh)")
    p.set_defaults(func=cmd_goldens)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        return args.func(args)
    except DomainError as exc:
        return _error({"error": "validation", "detail": str(exc)}, EXIT_CONFIG)
    except FileNotFoundError as exc:
        return _error({"error": "missing-file", "detail": str(exc)}, EXIT_CONFIG)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        return _error({"error": "config", "detail": str(exc)}, EXIT_CONFIG)


if __name__ == "__main__":
    sys.exit(main())
