"""Max-min expected utility over the assignment polytope."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..lp import Status, build_bistochastic, solve, xvar
from ..model import Assignment, DimensionError, PreferenceProfile, as_fraction


@dataclass(frozen=True)
class CardinalUtilityProfile:
    """``u[i][o]``: agent ``i``'s utility for object ``o``."""

    u: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[object]]) -> "CardinalUtilityProfile":
        return cls(tuple(tuple(as_fraction(v) for v in row) for row in rows))

    @classmethod
    def common(cls, profile: PreferenceProfile, by_rank: Iterable[object]) -> "CardinalUtilityProfile":
        """Every agent gets ``by_rank[k-1]`` from their ``k``-th choice."""
        vals = [as_fraction(v) for v in by_rank]
        n = profile.n
        return cls.from_rows([[vals[profile.rank[i][o] - 1] for o in range(n)] for i in range(n)])

    def check(self, profile: PreferenceProfile) -> None:
        """Raise unless utilities strictly follow each agent's ranking."""
        n = profile.n
        if len(self.u) != n or any(len(row) != n for row in self.u):
            raise DimensionError(f"utility matrix must be {n}x{n}")
        for i, order in enumerate(profile.orders):
            for a, b in zip(order, order[1:]):
                if not self.u[i][a] > self.u[i][b]:
                    raise ValueError(
                        f"utilities of agent {profile.agents[i]!r} are not strictly decreasing "
                        f"along their ranking ({profile.objects[a]} vs {profile.objects[b]})"
                    )

    def expected(self, x: Assignment, i: int) -> Fraction:
        return sum((p * u for p, u in zip(x.p[i], self.u[i])), Fraction(0))


def min_utility(utilities: CardinalUtilityProfile, x: Assignment) -> Fraction:
    return min(utilities.expected(x, i) for i in range(x.n))


def maxmin_cardinal(
    profile: PreferenceProfile, utilities: CardinalUtilityProfile, method: str | None = None
) -> tuple[Assignment, Fraction]:
    """Maximise the smallest expected utility.

    The optimal value is unique; the returned maximiser is just one of them.
    """
    utilities.check(profile)
    n = profile.n
    lp = build_bistochastic(n)
    lp.add_variable("t", free=True)
    for i in range(n):
        terms = {xvar(i, o): utilities.u[i][o] for o in range(n)}
        terms["t"] = -1
        lp.add_constraint(terms, ">=", 0, f"floor{i}")
    lp.maximize({"t": 1})
    sol = solve(lp, method)
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"max-min LP ended {sol.status.value}")
    x = Assignment(tuple(tuple(sol[xvar(i, o)] for o in range(n)) for i in range(n)))
    return x, sol.objective
