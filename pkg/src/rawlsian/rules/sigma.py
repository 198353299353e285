"""Sequential-LP computation of sigma-minimal assignments (Rawlsian as a special case).

For each rank ``k`` in the processing order, the loop alternates between two
kinds of program:

* a *bound* LP minimising the largest ``b_i(k)`` over agents whose value at
  ``k`` is still open, subject to every value fixed so far;
* one *probe* LP per open agent, maximising how far that agent alone can be
  pushed below the bound. Agents that cannot move (probe optimum zero) are
  fixed at the bound.

Once every ``(agent, rank)`` pair is fixed, the assignment is read off from
consecutive differences of the cumulative values.
"""

from __future__ import annotations

import logging
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..lp import LinearProgram, LpVerificationError, Status, solve
from ..lp.program import Constraint
from ..model import Assignment, PreferenceProfile, SigmaOrder

log = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class FixedLedger:
    """Cumulative values ``b_i(k)`` settled so far, plus the agents fixed per rank."""

    n: int
    values: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    fixed: dict[int, set[int]] = field(default_factory=dict)

    def fix(self, agent: int, k: int, value: Fraction) -> None:
        if (agent, k) in self.values:
            raise ValueError(f"b_{agent}({k}) already fixed")
        self.values[(agent, k)] = value
        self.fixed.setdefault(k, set()).add(agent)

    def open_agents(self, k: int) -> list[int]:
        done = self.fixed.get(k, set())
        return [i for i in range(self.n) if i not in done]

    def complete(self, ranks: Sequence[int]) -> bool:
        return all(len(self.fixed.get(k, ())) == self.n for k in ranks)

    def snapshot(self) -> "FixedLedger":
        return FixedLedger(self.n, dict(self.values), {k: set(v) for k, v in self.fixed.items()})


@dataclass(frozen=True)
class SigmaResult:
    assignment: Assignment
    ledger: FixedLedger
    sigma: SigmaOrder
    lp_count: int
    probe_count: int
    extraction_method: str


class _Builder:
    """Caches the constant rows shared by every LP of one run."""

    def __init__(self, profile: PreferenceProfile):
        n = profile.n
        self.n = n
        self.names = [("x", i, o) for i in range(n) for o in range(n)]
        self.base: list[Constraint] = []
        for i in range(n):
            self.base.append(Constraint({i * n + o: _ONE for o in range(n)}, "=", _ONE, f"row{i}"))
        for o in range(n):
            self.base.append(Constraint({i * n + o: _ONE for i in range(n)}, "=", _ONE, f"col{o}"))
        # cum[i][k]: coefficient map of b_i(k)
        self.cum: list[dict[int, dict[int, Fraction]]] = []
        for i in range(n):
            order = profile.orders[i]
            self.cum.append({k: {i * n + o: _ONE for o in order[k - 1:]} for k in range(1, n + 1)})
        self._fixed_rows: dict[tuple[int, int], Constraint] = {}

    def fixed_rows(self, ledger: FixedLedger) -> list[Constraint]:
        rows = []
        for (i, k), v in ledger.values.items():
            row = self._fixed_rows.get((i, k))
            if row is None or row.rhs != v:
                row = Constraint(self.cum[i][k], "=", v, f"fix_{i}_{k}")
                self._fixed_rows[(i, k)] = row
            rows.append(row)
        return rows

    def program(self, extra_var: str | None, rows: list[Constraint]) -> LinearProgram:
        lp = LinearProgram()
        # Direct construction; row coefficient maps are shared read-only.
        lp.names = list(self.names)
        lp.free = [False] * len(self.names)
        lp._index = {name: j for j, name in enumerate(self.names)}
        if extra_var is not None:
            lp.add_variable(extra_var)
        lp.constraints = rows
        return lp

    def bound_lp(self, ledger: FixedLedger, k: int, open_agents: list[int]) -> LinearProgram:
        lp = self.program("b", [])
        jb = lp.var("b")
        rows = self.base + self.fixed_rows(ledger)
        for i in open_agents:
            coeffs = dict(self.cum[i][k])
            coeffs[jb] = -_ONE
            rows.append(Constraint(coeffs, "<=", _ZERO, f"bound_{i}_{k}"))
        lp.constraints = rows
        lp.objective = {jb: _ONE}
        lp.sense = "min"
        return lp

    def probe_lp(self, ledger: FixedLedger, k: int, open_agents: list[int], target: int,
                 bstar: Fraction) -> LinearProgram:
        lp = self.program("eps", [])
        je = lp.var("eps")
        rows = self.base + self.fixed_rows(ledger)
        for i in open_agents:
            if i == target:
                coeffs = dict(self.cum[i][k])
                coeffs[je] = _ONE
                rows.append(Constraint(coeffs, "<=", bstar, f"probe_{i}_{k}"))
            else:
                rows.append(Constraint(self.cum[i][k], "<=", bstar, f"cap_{i}_{k}"))
        lp.constraints = rows
        lp.objective = {je: _ONE}
        lp.sense = "max"
        return lp

    def cumulative(self, values: dict, i: int, k: int) -> Fraction:
        return sum((values[self.names[j]] for j in self.cum[i][k]), _ZERO)


def _solve_probe(args) -> Fraction:
    lp, method = args
    sol = solve(lp, method)
    if sol.status is not Status.OPTIMAL:
        raise LpVerificationError(f"probe LP ended {sol.status.value}")
    return sol


def sigma_minimal_details(
    profile: PreferenceProfile,
    sigma: SigmaOrder,
    *,
    method: str | None = None,
    scan_order: Sequence[int] | None = None,
    shortcuts: bool = True,
    executor: Executor | None = None,
) -> SigmaResult:
    """Compute the sigma-minimal assignment and keep the bookkeeping.

    Args:
        profile: Strict preferences.
        sigma: Order in which ranks ``2..n`` are settled.
        method: LP route passed to :func:`rawlsian.lp.solve`.
        scan_order: Order in which open agents are probed (default ascending).
        shortcuts: Skip probes whose outcome is already known. An agent seen
            strictly below the bound in any solution of the current round
            cannot be stuck there, and when a single candidate is left it must
            be the stuck one.
        executor: If given, the probes of one round run through
            ``executor.map`` against the same ledger snapshot. Shortcuts then
            only use the bound LP's solution.
    """
    n = profile.n
    if sigma.n != n:
        raise ValueError(f"sigma is for n={sigma.n}, profile has n={n}")
    scan = list(range(n)) if scan_order is None else list(scan_order)
    if sorted(scan) != list(range(n)):
        raise ValueError("scan_order must be a permutation of the agent indices")
    pos = {i: p for p, i in enumerate(scan)}

    builder = _Builder(profile)
    ledger = FixedLedger(n)
    lp_count = probes = 0

    for k in sigma.order:
        while True:
            open_agents = ledger.open_agents(k)
            if not open_agents:
                break
            sol = solve(builder.bound_lp(ledger, k, open_agents), method)
            lp_count += 1
            if sol.status is not Status.OPTIMAL:
                raise LpVerificationError(f"bound LP at rank {k} ended {sol.status.value}")
            bstar = sol.objective
            if bstar == 0:
                for i in open_agents:
                    ledger.fix(i, k, _ZERO)
                log.debug("rank %d: bound 0, fixing %d agents", k, len(open_agents))
                continue

            movable: set[int] = set()

            def note(values) -> None:
                if shortcuts:
                    for i in open_agents:
                        if builder.cumulative(values, i, k) < bstar:
                            movable.add(i)

            note(sol.values)
            snap = ledger.snapshot()
            candidates = sorted(open_agents, key=pos.__getitem__)
            stuck: list[int] = []
            if executor is not None:
                todo = [i for i in candidates if i not in movable]
                if shortcuts and len(todo) == 1:
                    stuck = todo
                else:
                    lps = [(builder.probe_lp(snap, k, open_agents, i, bstar), method) for i in todo]
                    results = list(executor.map(_solve_probe, lps))
                    lp_count += len(results)
                    probes += len(results)
                    stuck = [i for i, r in zip(todo, results) if r.objective == 0]
            else:
                for idx, i in enumerate(candidates):
                    if i in movable:
                        continue
                    rest = [j for j in candidates[idx + 1:] if j not in movable]
                    if shortcuts and not stuck and not rest:
                        stuck.append(i)  # someone must be stuck; only i is left
                        break
                    r = _solve_probe((builder.probe_lp(snap, k, open_agents, i, bstar), method))
                    lp_count += 1
                    probes += 1
                    if r.objective == 0:
                        stuck.append(i)
                    else:
                        note(r.values)
            if not stuck:
                raise LpVerificationError(f"no agent is stuck at the bound {bstar} for rank {k}")
            for i in stuck:
                ledger.fix(i, k, bstar)
            log.debug("rank %d: bound %s, fixed %s", k, bstar, stuck)

    assignment, how = _extract(profile, builder, ledger, method)
    log.info("sigma-minimal n=%d: %d LPs (%d probes)", n, lp_count, probes)
    return SigmaResult(assignment, ledger, sigma, lp_count, probes, how)


def _extract(profile: PreferenceProfile, builder: _Builder, ledger: FixedLedger,
             method: str | None) -> tuple[Assignment, str]:
    """Rebuild the matrix from the ledger and confirm it with a feasibility LP."""
    n = profile.n

    def b(i: int, k: int) -> Fraction:
        if k == 1:
            return _ONE
        if k == n + 1:
            return _ZERO
        return ledger.values[(i, k)]

    rows = [[_ZERO] * n for _ in range(n)]
    for i in range(n):
        for k in range(1, n + 1):
            rows[i][profile.orders[i][k - 1]] = b(i, k) - b(i, k + 1)
    x = Assignment(tuple(tuple(r) for r in rows))
    if n == 1:
        return x, "differences"
    lp = builder.program(None, builder.base + builder.fixed_rows(ledger))
    sol = solve(lp, method)
    if sol.status is not Status.OPTIMAL:
        raise LpVerificationError("fully fixed system is infeasible")
    for i in range(n):
        for o in range(n):
            if sol[("x", i, o)] != x.p[i][o]:
                raise LpVerificationError(
                    f"extraction mismatch at ({i}, {o}): LP {sol[('x', i, o)]} vs differences {x.p[i][o]}"
                )
    return x, "differences+lp"


def sigma_minimal(profile: PreferenceProfile, sigma: SigmaOrder, **kwargs) -> Assignment:
    """The unique sigma-minimal assignment. Keyword arguments as in :func:`sigma_minimal_details`."""
    return sigma_minimal_details(profile, sigma, **kwargs).assignment


def rawlsian_details(profile: PreferenceProfile, **kwargs) -> SigmaResult:
    return sigma_minimal_details(profile, SigmaOrder.rawlsian(profile.n), **kwargs)


def rawlsian(profile: PreferenceProfile, **kwargs) -> Assignment:
    """The Rawlsian assignment: ranks settled from worst (``n``) to second best.

    >>> p = PreferenceProfile.from_lists(["abc", "abc", "bca"])
    >>> [[str(v) for v in row] for row in rawlsian(p).p]
    [['1/2', '1/2', '0'], ['1/2', '1/2', '0'], ['0', '0', '1']]
    """
    return rawlsian_details(profile, **kwargs).assignment
