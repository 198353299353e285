"""Exact rational linear programming over the assignment polytope.

:func:`solve` is the single entry point. Two routes produce the optimum:

* ``"simplex"``: two-phase tableau simplex in :class:`~fractions.Fraction`
  arithmetic with Bland's rule. Slow but self-contained.
* ``"certified"``: HiGHS proposes primal and dual solutions, which are rounded
  to rationals and accepted only after an exact optimality check. Falls back
  to the simplex whenever the check fails or HiGHS reports a non-optimal status.

``"auto"`` (the default) picks the simplex for small programs and the
certified route otherwise. The environment variable ``RAWLSIAN_LP_METHOD``
overrides the default. Either way the returned point is substituted back into
every constraint before it is handed out.
"""

from __future__ import annotations

import logging
import os

from .certify import certified_solve
from .program import (
    Constraint,
    LinearProgram,
    LpSolution,
    MalformedLP,
    Status,
    add_cumulative_constraint,
    build_bistochastic,
    cumulative_terms,
    xvar,
)
from .simplex import simplex_solve

__all__ = [
    "Constraint",
    "LinearProgram",
    "LpSolution",
    "LpVerificationError",
    "MalformedLP",
    "Status",
    "add_cumulative_constraint",
    "build_bistochastic",
    "cumulative_terms",
    "solve",
    "xvar",
]

log = logging.getLogger(__name__)

METHODS = ("auto", "simplex", "certified")
# Below this many variables the pure-Python simplex beats the scipy round trip.
AUTO_THRESHOLD = 12


class LpVerificationError(RuntimeError):
    """A solver returned a point that fails exact substitution."""


def _pick(lp: LinearProgram, method: str | None) -> str:
    if method is None:
        method = os.environ.get("RAWLSIAN_LP_METHOD", "auto")
    if method not in METHODS:
        raise ValueError(f"unknown LP method {method!r}; choose from {METHODS}")
    if method == "auto":
        return "simplex" if lp.num_vars < AUTO_THRESHOLD else "certified"
    return method


def solve(lp: LinearProgram, method: str | None = None) -> LpSolution:
    """Solve ``lp`` to an exact rational optimum.

    Args:
        lp: The program. Variables are nonnegative unless declared free.
        method: ``"auto"``, ``"simplex"`` or ``"certified"``.

    Returns:
        An :class:`LpSolution`. Infeasible and unbounded programs are reported
        through ``status`` rather than raised.

    Raises:
        MalformedLP: if the program has no variables.
        LpVerificationError: if the returned point violates a constraint.
    """
    if lp.num_vars == 0:
        raise MalformedLP("program declares no variables")
    route = _pick(lp, method)
    values = objective = None
    used = route
    if route == "certified":
        got = certified_solve(lp)
        if got is not None:
            values, objective = got
        else:
            used = "simplex"
    if values is None:
        status, values, objective, pivots = simplex_solve(lp)
        log.debug("simplex: %s after %d pivots", status.value, pivots)
        if status is not Status.OPTIMAL:
            return LpSolution(status, method=used)
    bad = lp.violations(values)
    if bad:
        raise LpVerificationError(f"{used} returned an infeasible point: {bad[:3]}")
    return LpSolution(Status.OPTIMAL, objective, dict(zip(lp.names, values)), used)
