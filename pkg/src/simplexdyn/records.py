"""Input parsing and JSON/CSV serialization for the command line.

Numbers are written as decimal strings with ``precision_bits // 3``
significant digits so that high-precision values survive a round trip.

CSV columns, in order::

    step, og2, p, pt, prod_12_34, prod_13_24, prod_14_23, <state columns>

where the state columns are ``d12 d13 d14 d23 d24 d34`` (tetra, quad),
``s t u`` (triangle), ``a b`` (trapezoid) or ``v<i>_<k>`` (vertices, vertex i,
coordinate k).  Absent quantities are empty cells.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import mpmath

from .dynamics import Orbit, OrbitRecord, Regime, TrapezoidState
from .errors import InputError
from .numerics import PrecisionPolicy
from .simplex import EDGE_NAMES, EdgeParams, TriangleParams, VertexConfig, params_from_vertices, \
    triangle_params_from_vertices

PRODUCT_NAMES = ("prod_12_34", "prod_13_24", "prod_14_23")
PARAMS_CROSSCHECK_TOL = 1e-9


def digits_for(policy: PrecisionPolicy) -> int:
    return policy.significand_bits // 3


def fmt(x, digits: int) -> str | None:
    if x is None:
        return None
    return mpmath.nstr(x, digits)


def state_fields(state, digits: int) -> dict:
    if isinstance(state, EdgeParams):
        return {k: fmt(v, digits) for k, v in zip(EDGE_NAMES, state.values)}
    if isinstance(state, TriangleParams):
        return {k: fmt(v, digits) for k, v in zip("stu", state.values)}
    if isinstance(state, TrapezoidState):
        return {"a": fmt(state.a, digits), "b": fmt(state.b, digits)}
    if isinstance(state, VertexConfig):
        return {"vertices": [[fmt(x, digits) for x in v] for v in state.vertices]}
    raise TypeError(f"unknown state type {type(state).__name__}")


def record_to_dict(rec: OrbitRecord, digits: int) -> dict:
    return {
        "step": rec.step,
        "og2": fmt(rec.og2, digits),
        "pt": fmt(rec.pt, digits),
        "products": None if rec.products is None else [fmt(x, digits) for x in rec.products],
        "params": state_fields(rec.state, digits),
        "p": fmt(rec.p, digits),
    }


def _csv_state_columns(state) -> list:
    fields = state_fields(state, 1)
    if "vertices" in fields:
        return [f"v{i}_{k}" for i, v in enumerate(fields["vertices"]) for k in range(len(v))]
    return list(fields)


def orbit_to_json(orbit: Orbit, policy: PrecisionPolicy) -> str:
    d = digits_for(policy)
    doc = {
        "regime": orbit.regime.value,
        "precision_bits": policy.significand_bits,
        "converged": orbit.converged,
        "records": [record_to_dict(r, d) for r in orbit],
    }
    return json.dumps(doc, indent=1) + "\n"


def orbit_to_csv(orbit: Orbit, policy: PrecisionPolicy) -> str:
    d = digits_for(policy)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    state_cols = _csv_state_columns(orbit[0].state)
    w.writerow(["step", "og2", "p", "pt", *PRODUCT_NAMES, *state_cols])
    for rec in orbit:
        row = record_to_dict(rec, d)
        prods = row["products"] or [None] * 3
        params = row["params"]
        if "vertices" in params:
            state_vals = [x for v in params["vertices"] for x in v]
        else:
            state_vals = [params[c] for c in state_cols]
        cells = [rec.step, row["og2"], row["p"], row["pt"], *prods, *state_vals]
        w.writerow(["" if c is None else c for c in cells])
    return buf.getvalue()


def rows_to_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if c is None else c for c in row])
    return buf.getvalue()


def load_input(text: str) -> dict:
    """Parse ``--input``: ``@path`` (JSON file), inline JSON, or a comma list."""
    text = text.strip()
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise InputError(f"cannot read input file: {exc}") from exc
        text = text.strip()
    if text.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON input: {exc}") from exc
        if not isinstance(doc, dict) or not ({"vertices", "params"} & doc.keys()):
            raise InputError('JSON input needs a "vertices" or "params" entry')
        return doc
    return {"params": [x.strip() for x in text.split(",") if x.strip()]}


def _decimal(x):
    # strings keep full precision; JSON numbers arrive as float or int
    if isinstance(x, (str, int)):
        return x
    if isinstance(x, float):
        return repr(x)
    raise InputError(f"not a number: {x!r}")


def build_initial(doc: dict, regime: Regime, policy: PrecisionPolicy, normalize: bool = False):
    """Turn parsed input into the initial state of ``regime``.

    Vertices take precedence over parameters; when both are present the
    parameters are checked against those derived from the vertices.
    """
    params = doc.get("params")
    vertices = doc.get("vertices")
    state = None
    if vertices is not None:
        pts = [[_decimal(x) for x in v] for v in vertices]
        cfg = VertexConfig.from_points(pts, policy, normalize=normalize)
        if regime in (Regime.TETRA, Regime.QUAD):
            state = params_from_vertices(cfg, policy).validate(policy)
        elif regime is Regime.TRIANGLE:
            state = triangle_params_from_vertices(cfg, policy).validate(policy)
        elif regime is Regime.VERTICES:
            state = cfg
        else:
            raise InputError("the trapezoid regime takes parameters a,b")
        if params is not None and regime is not Regime.VERTICES:
            given = [policy.real(_decimal(x)) for x in params]
            if len(given) != len(state.values) or any(
                abs(g - v) > PARAMS_CROSSCHECK_TOL for g, v in zip(given, state.values)
            ):
                raise InputError("parameters disagree with the given vertices")
        return state
    if params is None:
        raise InputError("no vertices or parameters given")
    vals = [_decimal(x) for x in params]
    if regime in (Regime.TETRA, Regime.QUAD):
        return EdgeParams.from_sequence(vals, policy).validate(policy)
    if regime is Regime.TRIANGLE:
        if len(vals) == 2:
            return TriangleParams.from_st(*vals, policy).validate(policy)
        if len(vals) != 3:
            raise InputError("triangle parameters are s,t,u")
        return TriangleParams(*(policy.real(v) for v in vals)).validate(policy)
    if regime is Regime.TRAPEZOID:
        if len(vals) != 2:
            raise InputError("trapezoid parameters are a,b")
        return TrapezoidState(*(policy.real(v) for v in vals)).validate(policy)
    raise InputError("the vertices regime needs vertex coordinates")
