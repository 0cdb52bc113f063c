"""Invariant suite over seeded random tetrahedra (the ``verify`` subcommand)."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .dynamics import Regime, run_orbit, step_params, step_vertices
from .limits import tetra_limit
from .numerics import PrecisionPolicy
from .sampling import generate_random
from .simplex import ShapeClass, params_from_vertices, shape_class, unit_radius_residual

CHECKS = (
    "unit_radius",
    "og2_decreasing",
    "products_nondecreasing",
    "pt_nondecreasing",
    "pt_lambda_squared",
    "lambda_at_least_one",
    "cross_map",
    "limit_agreement",
)

MONO_STEPS = 100
CROSS_STEPS = 20
LIMIT_STEPS = 200
MAX_LIMIT_STEPS = 5000
LIMIT_TOL = 1e-6


@dataclass
class TrialResult:
    index: int
    rate: float
    limit_steps: int | None
    deferred: bool = False
    violations: dict = field(default_factory=lambda: dict.fromkeys(CHECKS, 0))

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())


def monotonicity_violations(orbit, policy: PrecisionPolicy) -> dict:
    """Count breaches of the monotonicity theorem along a tetrahedron orbit."""
    slack = 64 * policy.tolerance
    out = dict.fromkeys(("og2_decreasing", "products_nondecreasing", "pt_nondecreasing",
                         "pt_lambda_squared", "lambda_at_least_one"), 0)
    with policy.context():
        for cur, nxt in zip(orbit.records, orbit.records[1:]):
            if shape_class(cur.state, policy) is ShapeClass.GENERIC and not nxt.og2 < cur.og2:
                out["og2_decreasing"] += 1
            if any(b < a - slack for a, b in zip(cur.products, nxt.products)):
                out["products_nondecreasing"] += 1
            if nxt.pt < cur.pt - slack:
                out["pt_nondecreasing"] += 1
            if abs(nxt.pt - cur.lam ** 2 * cur.pt) > slack:
                out["pt_lambda_squared"] += 1
            if cur.lam < 1 - slack:
                out["lambda_at_least_one"] += 1
    return out


def cross_map_violations(cfg, steps: int, policy: PrecisionPolicy) -> int:
    slack = 64 * policy.tolerance
    bad = 0
    with policy.context():
        p = params_from_vertices(cfg, policy)
        for _ in range(steps):
            cfg = step_vertices(cfg, policy)
            p, _ = step_params(p, policy)
            q = params_from_vertices(cfg, policy)
            if any(abs(x - y) > slack for x, y in zip(p.values, q.values)):
                bad += 1
    return bad


def limit_budget(rate: float, base: int = LIMIT_STEPS) -> int:
    """Steps granted to reach the predicted limit: the base budget plus the
    geometric horizon ``log(1e-8) / log(rate)``."""
    if rate <= 0:
        return base
    if rate >= 1:
        return math.inf
    return base + math.ceil(math.log(1e-8) / math.log(rate))


def run_trial(seed: int, index: int, bits: int) -> TrialResult:
    policy = PrecisionPolicy(bits)
    cfg = generate_random(Regime.TETRA, 3, [seed, index], policy)
    with policy.context():
        p = params_from_vertices(cfg, policy)
        lim = tetra_limit(p, policy)
        rate = float(lim.rate_r)
        res = TrialResult(index, rate, None)
        if abs(unit_radius_residual(p, policy)) > 64 * policy.tolerance:
            res.violations["unit_radius"] += 1
        orbit = run_orbit(p, MONO_STEPS, Regime.TETRA, policy)
        res.violations.update(monotonicity_violations(orbit, policy))
        res.violations["cross_map"] = cross_map_violations(cfg, CROSS_STEPS, policy)

        target = lim.params.values

        def close(rec):
            return max(abs(x - y) for x, y in zip(rec.state.values, target)) < LIMIT_TOL

        budget = limit_budget(rate)
        if budget > MAX_LIMIT_STEPS:
            # horizon beyond the cap: only the base budget is run, and a miss is deferred
            orbit = run_orbit(p, LIMIT_STEPS, Regime.TETRA, policy, stop_when=close)
            if close(orbit[-1]):
                res.limit_steps = orbit[-1].step
            else:
                res.deferred = True
            return res
        orbit = run_orbit(p, budget, Regime.TETRA, policy, stop_when=close)
        if close(orbit[-1]):
            res.limit_steps = orbit[-1].step
        else:
            res.violations["limit_agreement"] += 1
    return res


def _run_indexed(args):
    return run_trial(*args)


def run_suite(n: int, seed: int, bits: int, workers: int = 1) -> list:
    """Run ``n`` trials; results are in trial order whatever ``workers`` is."""
    jobs = [(seed, i, bits) for i in range(n)]
    if workers <= 1:
        return [run_trial(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_run_indexed, jobs))


def summary_rows(results: list) -> list:
    rows = []
    for check in CHECKS:
        rows.append([check, len(results), sum(r.violations[check] for r in results)])
    rows.append(["limit_agreement_deferred", len(results), sum(r.deferred for r in results)])
    return rows


def format_table(rows: list) -> str:
    header = ("check", "trials", "violations")
    width = max(len(header[0]), *(len(r[0]) for r in rows))
    lines = [f"{header[0]:<{width}}  {header[1]:>6}  {header[2]:>10}"]
    lines += [f"{name:<{width}}  {trials:>6}  {bad:>10}" for name, trials, bad in rows]
    return "\n".join(lines) + "\n"
