"""Float-proposed, exactly certified optima.

HiGHS (through :func:`scipy.optimize.linprog`) proposes a primal point and dual
multipliers. Both are rounded to nearby rationals and accepted only if, in
exact integer arithmetic, the point is primal feasible, the multipliers are
dual feasible, and the two objective values coincide. Weak duality then makes
the rounded point an exact optimum. Anything short of that returns ``None`` and
the caller falls back to the exact simplex.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .program import LinearProgram

log = logging.getLogger(__name__)

DENOMINATOR_LIMITS = (10**6, 10**10)


@dataclass
class _Compiled:
    # rows in "<=" form (ub) and "=" form (eq), integer coefficients after scaling
    ub_cols: list[list[int]]
    ub_vals: list[list[int]]
    ub_rhs: list[Fraction]
    eq_cols: list[list[int]]
    eq_vals: list[list[int]]
    eq_rhs: list[Fraction]
    cost: list[int]
    cost_scale: int
    nvars: int


def _lcm_den(values) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def _compile(lp: LinearProgram) -> _Compiled:
    ub_cols, ub_vals, ub_rhs = [], [], []
    eq_cols, eq_vals, eq_rhs = [], [], []
    for con in lp.constraints:
        scale = _lcm_den(con.coeffs.values())
        if con.relation == ">=":
            scale = -scale
        cols = list(con.coeffs)
        vals = [int(con.coeffs[j] * scale) for j in cols]
        rhs = con.rhs * scale
        if con.relation == "=":
            eq_cols.append(cols), eq_vals.append(vals), eq_rhs.append(rhs)
        else:
            ub_cols.append(cols), ub_vals.append(vals), ub_rhs.append(rhs)
    cost_scale = _lcm_den(lp.objective.values()) * (1 if lp.sense == "min" else -1)
    cost = [0] * lp.num_vars
    for j, c in lp.objective.items():
        cost[j] = int(c * cost_scale)
    return _Compiled(ub_cols, ub_vals, ub_rhs, eq_cols, eq_vals, eq_rhs, cost, cost_scale, lp.num_vars)


def _sparse(cols, vals, nvars):
    if not cols:
        return None
    data, ri, ci = [], [], []
    for r, (cs, vs) in enumerate(zip(cols, vals)):
        ri.extend([r] * len(cs))
        ci.extend(cs)
        data.extend(float(v) for v in vs)
    return csr_matrix((data, (ri, ci)), shape=(len(cols), nvars))


def _rationalize(arr, limit: int) -> list[Fraction]:
    out = []
    zero = Fraction(0)
    for v in arr:
        v = float(v)
        if abs(v) < 1e-13:
            out.append(zero)
        else:
            out.append(Fraction(v).limit_denominator(limit))
    return out


def _common(values: list[Fraction]) -> tuple[list[int], int]:
    den = _lcm_den(v for v in values if v)
    return [v.numerator * (den // v.denominator) for v in values], den


def _check(comp: _Compiled, free: list[bool], x: list[Fraction], y: list[Fraction],
           z: list[Fraction]) -> bool:
    X, L = _common(x)
    for j, v in enumerate(X):
        if v < 0 and not free[j]:
            return False
    for cols, vals, rhs in zip(comp.eq_cols, comp.eq_vals, comp.eq_rhs):
        lhs = sum(a * X[j] for j, a in zip(cols, vals))
        if lhs * rhs.denominator != rhs.numerator * L:
            return False
    for cols, vals, rhs in zip(comp.ub_cols, comp.ub_vals, comp.ub_rhs):
        lhs = sum(a * X[j] for j, a in zip(cols, vals))
        if lhs * rhs.denominator > rhs.numerator * L:
            return False
    if any(v > 0 for v in z):
        return False
    Y, Ly = _common(y + z)
    red = [c * Ly for c in comp.cost]
    for r, (cols, vals) in enumerate(zip(comp.eq_cols + comp.ub_cols, comp.eq_vals + comp.ub_vals)):
        w = Y[r]
        if w:
            for j, a in zip(cols, vals):
                red[j] -= a * w
    for j, v in enumerate(red):
        if v < 0 or (free[j] and v != 0):
            return False
    primal = Fraction(sum(c * X[j] for j, c in enumerate(comp.cost) if c), L)
    dual = sum((rhs * w for rhs, w in zip(comp.eq_rhs + comp.ub_rhs, Y) if w), Fraction(0)) / Ly
    return primal == dual


def certified_solve(lp: LinearProgram) -> tuple[list[Fraction], Fraction] | None:
    """Return exact ``(values, objective)`` or ``None`` if not certifiable.

    ``None`` is also returned when HiGHS reports infeasibility or
    unboundedness; those verdicts are left to the exact simplex.
    """
    comp = _compile(lp)
    n = comp.nvars
    c = np.array(comp.cost, dtype=float)
    bounds = [(None, None) if f else (0, None) for f in lp.free]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = linprog(
            c,
            A_ub=_sparse(comp.ub_cols, comp.ub_vals, n),
            b_ub=[float(v) for v in comp.ub_rhs] if comp.ub_cols else None,
            A_eq=_sparse(comp.eq_cols, comp.eq_vals, n),
            b_eq=[float(v) for v in comp.eq_rhs] if comp.eq_cols else None,
            bounds=bounds,
            method="highs",
        )
    if res.status != 0:
        log.debug("HiGHS status %s (%s); deferring to exact simplex", res.status, res.message)
        return None
    y_raw = res.eqlin.marginals if comp.eq_cols else []
    z_raw = res.ineqlin.marginals if comp.ub_cols else []
    for limit in DENOMINATOR_LIMITS:
        x = _rationalize(res.x, limit)
        y = _rationalize(y_raw, limit)
        z = _rationalize(z_raw, limit)
        if _check(comp, lp.free, x, y, z):
            obj = lp.evaluate(lp.objective, x)
            return x, obj
    log.debug("certificate rejected for LP with %d vars, %d rows", n, len(lp.constraints))
    return None
