"""Two-phase tableau simplex over exact rationals with Bland's anti-cycling rule."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .program import LinearProgram, Status

log = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class StandardForm:
    """``min c.z  s.t.  A z = b, z >= 0`` with ``b >= 0``.

    ``plus[j]``/``minus[j]`` map original variable ``j`` onto columns; ``minus``
    is ``None`` for nonnegative variables.
    """

    rows: list[dict[int, Fraction]]
    b: list[Fraction]
    c: dict[int, Fraction]
    ncols: int
    plus: list[int]
    minus: list[int | None]
    unit_col: list[int | None]
    sign: int


def to_standard_form(lp: LinearProgram) -> StandardForm:
    plus: list[int] = []
    minus: list[int | None] = []
    col = 0
    for is_free in lp.free:
        plus.append(col)
        col += 1
        if is_free:
            minus.append(col)
            col += 1
        else:
            minus.append(None)
    rows: list[dict[int, Fraction]] = []
    b: list[Fraction] = []
    unit_col: list[int | None] = []
    for con in lp.constraints:
        row: dict[int, Fraction] = {}
        for j, a in con.coeffs.items():
            row[plus[j]] = a
            if minus[j] is not None:
                row[minus[j]] = -a
        slack = None
        if con.relation == "<=":
            slack = col
            row[col] = _ONE
            col += 1
        elif con.relation == ">=":
            slack = col
            row[col] = -_ONE
            col += 1
        rhs = con.rhs
        if rhs < 0:
            row = {j: -a for j, a in row.items()}
            rhs = -rhs
        rows.append(row)
        b.append(rhs)
        unit_col.append(slack if slack is not None and row[slack] == _ONE else None)
    sign = 1 if lp.sense == "min" else -1
    c: dict[int, Fraction] = {}
    for j, a in lp.objective.items():
        c[plus[j]] = sign * a
        if minus[j] is not None:
            c[minus[j]] = -sign * a
    return StandardForm(rows, b, c, col, plus, minus, unit_col, sign)


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int], ncols: int):
        self.T = rows
        self.basis = basis
        self.ncols = ncols
        self.d: list[Fraction] = [_ZERO] * (ncols + 1)
        self.pivots = 0

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        prow = T[r]
        piv = prow[j]
        if piv != _ONE:
            inv = _ONE / piv
            for k in range(len(prow)):
                if prow[k]:
                    prow[k] *= inv
        nz = [k for k, v in enumerate(prow) if v]
        for rr, row in enumerate(T):
            if rr == r:
                continue
            f = row[j]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
        f = self.d[j]
        if f:
            d = self.d
            for k in nz:
                d[k] -= f * prow[k]
        self.basis[r] = j
        self.pivots += 1

    def run(self, banned: set[int]) -> Status:
        """Bland's rule: lowest-index entering column, lowest-index leaving basic variable."""
        T = self.T
        last = self.ncols
        while True:
            enter = -1
            for j in range(self.ncols):
                if self.d[j] < 0 and j not in banned:
                    enter = j
                    break
            if enter < 0:
                return Status.OPTIMAL
            best_r = -1
            best_ratio = None
            for r, row in enumerate(T):
                a = row[enter]
                if a > 0:
                    ratio = row[last] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[r] < self.basis[best_r])
                    ):
                        best_ratio = ratio
                        best_r = r
            if best_r < 0:
                return Status.UNBOUNDED
            self.pivot(best_r, enter)


def simplex_solve(lp: LinearProgram) -> tuple[Status, list[Fraction] | None, Fraction | None, int]:
    """Solve ``lp`` exactly.

    Returns ``(status, values, objective, pivots)`` where ``values`` are the
    original variables (free ones recombined) when optimal.
    """
    sf = to_standard_form(lp)
    m = len(sf.rows)
    n_struct = sf.ncols
    # Artificial columns for rows lacking a +1 slack.
    basis: list[int] = []
    artificial: list[int] = []
    ncols = n_struct
    art_of_row: list[int | None] = []
    for r in range(m):
        if sf.unit_col[r] is not None:
            basis.append(sf.unit_col[r])
            art_of_row.append(None)
        else:
            basis.append(ncols)
            artificial.append(ncols)
            art_of_row.append(ncols)
            ncols += 1
    T: list[list[Fraction]] = []
    for r in range(m):
        row = [_ZERO] * (ncols + 1)
        for j, a in sf.rows[r].items():
            row[j] = a
        if art_of_row[r] is not None:
            row[art_of_row[r]] = _ONE
        row[ncols] = sf.b[r]
        T.append(row)
    tab = _Tableau(T, basis, ncols)
    art_set = set(artificial)

    if artificial:
        d = [_ZERO] * (ncols + 1)
        for r in range(m):
            if art_of_row[r] is not None:
                for k, v in enumerate(T[r]):
                    if v and k not in art_set:
                        d[k] -= v
        tab.d = d
        tab.run(banned=set())
        if tab.d[ncols] != 0:
            log.debug("phase 1 ends with infeasibility %s", -tab.d[ncols])
            return Status.INFEASIBLE, None, None, tab.pivots
        # Drive remaining (zero-valued) artificials out of the basis.
        keep = []
        for r in range(m):
            if tab.basis[r] in art_set:
                row = tab.T[r]
                j = next((k for k in range(n_struct) if row[k]), None)
                if j is None:
                    continue  # redundant row
                tab.pivot(r, j)
            keep.append(r)
        tab.T = [tab.T[r] for r in keep]
        tab.basis = [tab.basis[r] for r in keep]

    d = [_ZERO] * (ncols + 1)
    for j, a in sf.c.items():
        d[j] = a
    for r, row in enumerate(tab.T):
        cb = sf.c.get(tab.basis[r])
        if cb:
            for k, v in enumerate(row):
                if v:
                    d[k] -= cb * v
    tab.d = d
    status = tab.run(banned=art_set)
    if status is Status.UNBOUNDED:
        return status, None, None, tab.pivots
    z = [_ZERO] * ncols
    for r, row in enumerate(tab.T):
        z[tab.basis[r]] = row[ncols]
    values = []
    for j in range(len(lp.names)):
        v = z[sf.plus[j]]
        if sf.minus[j] is not None:
            v -= z[sf.minus[j]]
        values.append(v)
    obj = lp.evaluate(lp.objective, values)
    return Status.OPTIMAL, values, obj, tab.pivots
