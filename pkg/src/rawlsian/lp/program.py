"""Linear programs with exact rational data over the assignment polytope."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Union

from ..model import PreferenceProfile, as_fraction

Rational = Union[int, Fraction, str]

RELATIONS = ("<=", "=", ">=")


class MalformedLP(ValueError):
    """The program references unknown variables or uses an unknown relation."""


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class Constraint:
    coeffs: dict[int, Fraction]
    relation: str
    rhs: Fraction
    name: str | None = None


@dataclass
class LinearProgram:
    """Variables are nonnegative unless declared free.

    Constraint and objective coefficients are keyed by variable index; use
    :meth:`var` to translate names.
    """

    names: list[Hashable] = field(default_factory=list)
    free: list[bool] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    sense: str = "min"
    objective: dict[int, Fraction] = field(default_factory=dict)
    _index: dict[Hashable, int] = field(default_factory=dict, repr=False)

    def add_variable(self, name: Hashable, free: bool = False) -> int:
        if name in self._index:
            raise MalformedLP(f"variable {name!r} declared twice")
        self._index[name] = len(self.names)
        self.names.append(name)
        self.free.append(free)
        return self._index[name]

    def var(self, name: Hashable) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise MalformedLP(f"undeclared variable {name!r}") from None

    def has_var(self, name: Hashable) -> bool:
        return name in self._index

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def _terms(self, terms: Mapping[Hashable, Rational]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for name, c in terms.items():
            j = self.var(name)
            c = as_fraction(c)
            if c:
                out[j] = out.get(j, Fraction(0)) + c
        return {j: c for j, c in out.items() if c}

    def add_constraint(
        self,
        terms: Mapping[Hashable, Rational],
        relation: str,
        rhs: Rational,
        name: str | None = None,
    ) -> Constraint:
        if relation not in RELATIONS:
            raise MalformedLP(f"unknown relation {relation!r}")
        con = Constraint(self._terms(terms), relation, as_fraction(rhs), name)
        self.constraints.append(con)
        return con

    def add_indexed(self, coeffs: dict[int, Fraction], relation: str, rhs: Fraction,
                    name: str | None = None) -> Constraint:
        """Fast path for callers that already hold variable indices."""
        if relation not in RELATIONS:
            raise MalformedLP(f"unknown relation {relation!r}")
        for j in coeffs:
            if not 0 <= j < len(self.names):
                raise MalformedLP(f"variable index {j} out of range")
        con = Constraint(dict(coeffs), relation, rhs, name)
        self.constraints.append(con)
        return con

    def minimize(self, terms: Mapping[Hashable, Rational]) -> None:
        self.sense = "min"
        self.objective = self._terms(terms)

    def maximize(self, terms: Mapping[Hashable, Rational]) -> None:
        self.sense = "max"
        self.objective = self._terms(terms)

    def copy(self) -> "LinearProgram":
        return LinearProgram(
            names=list(self.names),
            free=list(self.free),
            constraints=[Constraint(dict(c.coeffs), c.relation, c.rhs, c.name) for c in self.constraints],
            sense=self.sense,
            objective=dict(self.objective),
            _index=dict(self._index),
        )

    def evaluate(self, coeffs: Mapping[int, Fraction], values: list[Fraction]) -> Fraction:
        return sum((c * values[j] for j, c in coeffs.items()), Fraction(0))

    def violations(self, values: list[Fraction]) -> list[str]:
        """Describe every constraint or sign bound that ``values`` breaks."""
        bad = []
        for j, v in enumerate(values):
            if not self.free[j] and v < 0:
                bad.append(f"{self.names[j]!r} = {v} < 0")
        for k, con in enumerate(self.constraints):
            lhs = self.evaluate(con.coeffs, values)
            ok = (
                lhs <= con.rhs if con.relation == "<="
                else lhs >= con.rhs if con.relation == ">="
                else lhs == con.rhs
            )
            if not ok:
                bad.append(f"row {con.name or k}: {lhs} {con.relation} {con.rhs} fails")
        return bad


@dataclass(frozen=True)
class LpSolution:
    status: Status
    objective: Fraction | None = None
    values: Mapping[Hashable, Fraction] = field(default_factory=dict)
    method: str = ""

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def __getitem__(self, name: Hashable) -> Fraction:
        return self.values[name]


def xvar(i: int, o: int) -> tuple[str, int, int]:
    return ("x", i, o)


def build_bistochastic(n: int) -> LinearProgram:
    """Variables ``("x", i, o)`` with every row and column summing to one."""
    if n < 1:
        raise ValueError("n must be at least 1")
    lp = LinearProgram()
    for i in range(n):
        for o in range(n):
            lp.add_variable(xvar(i, o))
    one = Fraction(1)
    for i in range(n):
        lp.add_indexed({i * n + o: one for o in range(n)}, "=", one, f"row{i}")
    for o in range(n):
        lp.add_indexed({i * n + o: one for i in range(n)}, "=", one, f"col{o}")
    return lp


def cumulative_terms(profile: PreferenceProfile, agent: int, k: int) -> dict[Hashable, Fraction]:
    """``{x[agent][o]: 1}`` over objects the agent ranks ``k`` or worse."""
    n = profile.n
    if not 1 <= k <= n:
        raise ValueError(f"rank {k} outside 1..{n}")
    i = profile.agent_index(agent)
    one = Fraction(1)
    return {xvar(i, o): one for o in profile.orders[i][k - 1:]}


def add_cumulative_constraint(
    lp: LinearProgram,
    profile: PreferenceProfile,
    agent: int | str,
    k: int,
    relation: str,
    rhs: Rational = 0,
    rhs_terms: Mapping[Hashable, Rational] | None = None,
    name: str | None = None,
) -> Constraint:
    """Append ``sum_{o: r[agent][o] >= k} x[agent][o]  <rel>  rhs + rhs_terms``.

    Variable terms on the right-hand side are moved to the left.
    """
    terms: dict[Hashable, Fraction] = dict(cumulative_terms(profile, agent, k))
    for v, c in (rhs_terms or {}).items():
        terms[v] = terms.get(v, Fraction(0)) - as_fraction(c)
    return lp.add_constraint(terms, relation, rhs, name)
