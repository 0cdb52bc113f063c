"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 numeric fault.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import reproductions, verify
from .dynamics import Regime, TrapezoidState, run_orbit
from .errors import InputError, NumericFault
from .limits import estimate_order, quad_limit, tail_ratio, tetra_limit, triangle_limit
from .numerics import DEFAULT_BITS, PrecisionPolicy
from .records import build_initial, digits_for, fmt, load_input, orbit_to_csv, orbit_to_json, rows_to_csv
from .sampling import generate_random
from .simplex import TriangleParams, VertexConfig, gamma, params_from_vertices, triangle_params_from_vertices

EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 1, 2, 3


def _initial_state(args, policy):
    regime = Regime(args.regime)
    if args.input is not None:
        doc = load_input(args.input)
        return build_initial(doc, regime, policy, normalize=args.normalize)
    sample = generate_random(regime, args.dim, args.seed, policy)
    if isinstance(sample, TrapezoidState) or regime is Regime.VERTICES:
        return sample
    if regime is Regime.TRIANGLE:
        return triangle_params_from_vertices(sample, policy)
    return params_from_vertices(sample, policy)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_orbit(args, policy) -> int:
    state = _initial_state(args, policy)
    orbit = run_orbit(state, args.steps, args.regime, policy)
    text = orbit_to_json(orbit, policy) if args.format == "json" else orbit_to_csv(orbit, policy)
    _emit(text, args.out)
    return 0


def _cmd_limit(args, policy) -> int:
    state = _initial_state(args, policy)
    d = digits_for(policy)
    if isinstance(state, TriangleParams):
        lim = triangle_limit(policy)
        fields = {"regime": "triangle", "s": fmt(lim.s, d), "t": fmt(lim.t, d), "u": fmt(lim.u, d)}
    else:
        if isinstance(state, VertexConfig):
            state = params_from_vertices(state, policy)
        if isinstance(state, TrapezoidState):
            state = params_from_vertices(state.vertices(policy), policy)
        regime = Regime(args.regime)
        if regime is Regime.TETRA:
            planar = False
        elif regime is Regime.QUAD:
            planar = True
        else:
            with policy.context():
                planar = gamma(state, policy) <= policy.tolerance
        lim = quad_limit(state, policy) if planar else tetra_limit(state, policy)
        fields = {
            "regime": lim.regime,
            "d12_inf": fmt(lim.d12_inf, d),
            "d13_inf": fmt(lim.d13_inf, d),
            "d14_inf": fmt(lim.d14_inf, d),
            "L": fmt(lim.L, d),
            "rate_r": fmt(lim.rate_r, d),
        }
    if args.format == "json":
        text = json.dumps(fields, indent=1) + "\n"
    else:
        text = rows_to_csv(list(fields), [list(fields.values())])
    _emit(text, args.out)
    return 0


def _cmd_order(args, policy) -> int:
    state = _initial_state(args, policy)
    orbit = run_orbit(state, args.steps, args.regime, policy)
    og = orbit.og()
    est = estimate_order(og, policy)
    fields = {
        "regime": orbit.regime.value,
        "steps_run": len(orbit) - 1,
        "order": repr(est.order),
        "constant": repr(est.constant),
        "lambda": None if est.lam is None else repr(est.lam),
        "residual": repr(est.residual),
        "points": est.points,
        "tail_ratio": repr(tail_ratio(og, policy=policy)),
    }
    if args.format == "json":
        text = json.dumps(fields, indent=1) + "\n"
    else:
        text = rows_to_csv(list(fields), [list(fields.values())])
    _emit(text, args.out)
    return 0


def _cmd_verify(args, policy) -> int:
    results = verify.run_suite(args.n, args.seed, policy.significand_bits, args.workers)
    rows = verify.summary_rows(results)
    if args.format == "json":
        doc = {
            "trials": args.n,
            "seed": args.seed,
            "precision_bits": policy.significand_bits,
            "checks": {name: bad for name, _, bad in rows},
        }
        text = json.dumps(doc, indent=1) + "\n"
    elif args.format == "csv":
        text = rows_to_csv(["check", "trials", "violations"], rows)
    else:
        text = verify.format_table(rows)
    _emit(text, args.out)
    return 0 if all(r.ok for r in results) else EXIT_VERIFY


def _cmd_worked_examples(args, policy) -> int:
    checks = reproductions.all_checks(policy)
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})" for c in checks]
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if all(c.passed for c in checks) else EXIT_VERIFY


def _add_common(p: argparse.ArgumentParser, fmt_choices=("json", "csv"), default_fmt="json"):
    p.add_argument("--precision-bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--format", choices=fmt_choices, default=default_fmt)
    p.add_argument("--out", help="write output to this path instead of stdout")


def _add_input(p: argparse.ArgumentParser, steps: int | None = None):
    p.add_argument("--regime", required=True, choices=[r.value for r in Regime])
    p.add_argument("--dim", type=int, default=3, help="dimension for the vertices regime (2..20)")
    p.add_argument("--seed", type=int, default=0, help="seed for a random initial configuration")
    p.add_argument("--input", help="inline comma list, inline JSON, or @file.json")
    p.add_argument("--normalize", action="store_true", help="project input vertices onto the unit sphere")
    if steps is not None:
        p.add_argument("--steps", type=int, default=steps)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simplexdyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("orbit", help="iterate a configuration and emit one record per step")
    _add_input(p, steps=20)
    _add_common(p, default_fmt="csv")
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("limit", help="closed-form limit shape and rate constant")
    _add_input(p)
    _add_common(p)
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("order", help="run an orbit and fit its convergence order")
    _add_input(p, steps=200)
    _add_common(p)
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("verify", help="invariant suite over seeded random tetrahedra")
    p.add_argument("--n", type=int, default=100, help="number of trials")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p, fmt_choices=("table", "json", "csv"), default_fmt="table")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("paper-examples", help="reproduce the worked quadrilateral, trapezoid and triangle examples")
    p.add_argument("--precision-bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_worked_examples)
    return parser


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        policy = PrecisionPolicy(args.precision_bits)
        if not 2 <= getattr(args, "dim", 3) <= 20:
            raise InputError("--dim must be in [2, 20]")
        if getattr(args, "steps", 0) < 0:
            raise InputError("--steps must be >= 0")
        return args.func(args, policy)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericFault as exc:
        where = f" at step {exc.step}" if exc.step is not None else ""
        print(f"numeric fault{where}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
