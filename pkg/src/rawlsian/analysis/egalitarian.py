"""The egalitarian criterion: can everyone be lifted above some agent's lottery?

An assignment ``y`` is inegalitarian when some agent ``j`` and some assignment
``x`` give every agent top-k masses at least those of ``y_j`` (read with ``j``'s
ranking), strictly at one ``k`` or more for each agent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..lp import Status, build_bistochastic, solve, xvar
from ..model import Assignment, PreferenceProfile, _check_dims, top_masses


@dataclass(frozen=True)
class EgalitarianReport:
    egalitarian: bool
    agent: int | None  # the agent j whose lottery everyone can beat
    witness: Assignment | None
    slack: Fraction  # best epsilon found for ``agent`` (0 when egalitarian)


def _beat_lp(profile: PreferenceProfile, target: list[Fraction], uniform: bool):
    n = profile.n
    lp = build_bistochastic(n)
    lp.add_variable("eps")
    for i in range(n):
        order = profile.orders[i]
        slacks = {}
        for k in range(1, n + 1):
            terms = {xvar(i, o): 1 for o in order[:k]}
            if uniform:
                if target[k - 1] < 1:
                    terms["eps"] = -1
            else:
                s = ("s", i, k)
                lp.add_variable(s)
                terms[s] = -1
                slacks[s] = 1
            lp.add_constraint(terms, ">=", target[k - 1], f"top_{i}_{k}")
        if not uniform:
            slacks["eps"] = -1
            lp.add_constraint(slacks, ">=", 0, f"strict_{i}")
    lp.maximize({"eps": 1})
    return lp


def _solve_for(profile: PreferenceProfile, y: Assignment, j: int, uniform: bool, method):
    target = top_masses(profile, j, y.p[j])
    if uniform and all(t == 1 for t in target):
        return None
    sol = solve(_beat_lp(profile, target, uniform), method)
    if sol.status is Status.INFEASIBLE:
        return None
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"egalitarian LP ended {sol.status.value}")
    n = profile.n
    x = Assignment(tuple(tuple(sol[xvar(i, o)] for o in range(n)) for i in range(n)))
    return sol.objective, x


def egalitarian_check(profile: PreferenceProfile, y: Assignment, method: str | None = None
                      ) -> EgalitarianReport:
    """Exact test: one LP per agent with per-agent slack sums."""
    _check_dims(profile, y)
    for j in range(profile.n):
        got = _solve_for(profile, y, j, uniform=False, method=method)
        if got is not None and got[0] > 0:
            return EgalitarianReport(False, j, got[1], got[0])
    return EgalitarianReport(True, None, None, Fraction(0))


def egalitarian_uniform_relaxation(profile: PreferenceProfile, y: Assignment,
                                   method: str | None = None) -> EgalitarianReport:
    """Sufficient test for inegalitarianism with one common margin.

    Requires every agent to beat ``y_j`` by the same ``delta`` at every ``k``
    where ``y_j``'s top-k mass is below one. A positive ``delta`` proves ``y``
    inegalitarian; zero proves nothing.
    """
    _check_dims(profile, y)
    for j in range(profile.n):
        got = _solve_for(profile, y, j, uniform=True, method=method)
        if got is not None and got[0] > 0:
            return EgalitarianReport(False, j, got[1], got[0])
    return EgalitarianReport(True, None, None, Fraction(0))
