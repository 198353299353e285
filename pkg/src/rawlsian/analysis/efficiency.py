"""sd-efficiency, decided twice: by a cycle search and by an LP."""

from __future__ import annotations

import graphlib
from dataclasses import dataclass
from fractions import Fraction

from ..lp import Status, build_bistochastic, solve, xvar
from ..model import Assignment, PreferenceProfile, _check_dims, sd_dominates_allocation


class OracleDisagreement(RuntimeError):
    """Two independent decision procedures returned different verdicts."""


@dataclass(frozen=True)
class CycleStep:
    """Agent ``agent`` gives up some of ``gives`` in exchange for ``gets``, which she prefers."""

    agent: int
    gives: int
    gets: int


@dataclass(frozen=True)
class SdEfficiencyReport:
    efficient: bool
    cycle: tuple[CycleStep, ...] | None
    improvement: Assignment | None
    lp_gain: Fraction
    lp_witness: Assignment | None

    def __iter__(self):
        # allows ``ok, cert = sd_efficient(...)``
        yield self.efficient
        yield self.cycle


def improving_cycle(profile: PreferenceProfile, x: Assignment) -> list[CycleStep] | None:
    """Find a cycle of objects along which trading makes every participant better off.

    Edge ``o -> o'`` exists when an agent holding some ``o'`` prefers ``o``.
    """
    n = profile.n
    witness: dict[tuple[int, int], int] = {}
    preds: dict[int, set[int]] = {o: set() for o in range(n)}
    for i in range(n):
        rank = profile.rank[i]
        for held in range(n):
            if x.p[i][held] > 0:
                for better in range(n):
                    if rank[better] < rank[held] and (better, held) not in witness:
                        witness[(better, held)] = i
                        preds[held].add(better)
    try:
        graphlib.TopologicalSorter(preds).prepare()
    except graphlib.CycleError as err:
        nodes = err.args[1]
        steps = []
        for o, o2 in zip(nodes, nodes[1:]):
            steps.append(CycleStep(witness[(o, o2)], gives=o2, gets=o))
        return steps
    return None


def apply_cycle(x: Assignment, steps: list[CycleStep]) -> Assignment:
    """Trade a small equal amount along the cycle."""
    delta = min(x.p[s.agent][s.gives] for s in steps) / len(steps)
    rows = [list(r) for r in x.p]
    for s in steps:
        rows[s.agent][s.gives] -= delta
        rows[s.agent][s.gets] += delta
    return Assignment(tuple(tuple(r) for r in rows))


def sd_improvement_lp(profile: PreferenceProfile, x: Assignment, method: str | None = None
                      ) -> tuple[Fraction, Assignment]:
    """Largest total top-k gain of any assignment over ``x`` without hurting anyone."""
    n = profile.n
    lp = build_bistochastic(n)
    objective = {}
    for i in range(n):
        order = profile.orders[i]
        acc = Fraction(0)
        for k in range(1, n):
            acc += x.p[i][order[k - 1]]
            s = ("s", i, k)
            lp.add_variable(s)
            terms = {xvar(i, o): 1 for o in order[:k]}
            terms[s] = -1
            lp.add_constraint(terms, ">=", acc, f"top_{i}_{k}")
            objective[s] = 1
    if not objective:
        return Fraction(0), x
    lp.maximize(objective)
    sol = solve(lp, method)
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"improvement LP ended {sol.status.value}")
    y = Assignment(tuple(tuple(sol[xvar(i, o)] for o in range(n)) for i in range(n)))
    return sol.objective, y


def sd_efficient(profile: PreferenceProfile, x: Assignment, method: str | None = None
                 ) -> SdEfficiencyReport:
    """Decide sd-efficiency with both methods and insist they agree.

    Raises:
        OracleDisagreement: if the cycle search and the LP disagree, or a
            certificate fails to check out.
    """
    _check_dims(profile, x)
    steps = improving_cycle(profile, x)
    gain, y = sd_improvement_lp(profile, x, method)
    graph_ok = steps is None
    lp_ok = gain == 0
    if graph_ok != lp_ok:
        raise OracleDisagreement(f"cycle search says efficient={graph_ok}, LP gain is {gain}")
    improvement = None
    if steps is not None:
        improvement = apply_cycle(x, steps)
        _check_dominates(profile, improvement, x, "cycle trade")
        _check_dominates(profile, y, x, "LP witness")
    return SdEfficiencyReport(
        efficient=graph_ok,
        cycle=tuple(steps) if steps else None,
        improvement=improvement,
        lp_gain=gain,
        lp_witness=None if lp_ok else y,
    )


def _check_dominates(profile: PreferenceProfile, y: Assignment, x: Assignment, label: str) -> None:
    if y == x or not all(sd_dominates_allocation(profile, i, y.p[i], x.p[i]) for i in range(x.n)):
        raise OracleDisagreement(f"{label} does not sd-dominate the input")
