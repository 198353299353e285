"""Problem and solution types for random assignment with strict ordinal preferences.

All probabilities are :class:`fractions.Fraction` values. Agents and objects are
referred to by dense integer indices internally; string identifiers only live on
:class:`PreferenceProfile` for I/O.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

AgentRef = Union[int, str]
Number = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Raised when matrices, rows or profiles do not have matching sizes."""


def as_fraction(value: object) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would silently carry binary rounding into an
    exact computation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact rational")


@dataclass(frozen=True)
class PreferenceProfile:
    """Strict, complete rankings of ``n`` objects by ``n`` agents.

    ``rank[i][o]`` is the position (1 = best) of object ``o`` in agent ``i``'s list.
    """

    agents: tuple[str, ...]
    objects: tuple[str, ...]
    rank: tuple[tuple[int, ...], ...]
    _orders: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.agents)
        if n < 1:
            raise ValueError("a problem needs at least one agent")
        if len(self.objects) != n:
            raise DimensionError(
                f"{n} agents but {len(self.objects)} objects; problems must be square"
            )
        if len(set(self.agents)) != n or len(set(self.objects)) != n:
            raise ValueError("agent and object identifiers must be unique")
        if len(self.rank) != n:
            raise DimensionError(f"expected {n} rank rows, got {len(self.rank)}")
        perm = set(range(1, n + 1))
        orders = []
        for i, row in enumerate(self.rank):
            if len(row) != n or set(row) != perm:
                raise ValueError(f"rank row of agent {self.agents[i]!r} is not a permutation of 1..{n}")
            order = [0] * n
            for o, r in enumerate(row):
                order[r - 1] = o
            orders.append(tuple(order))
        object.__setattr__(self, "_orders", tuple(orders))

    @classmethod
    def from_orders(
        cls,
        orders: Sequence[Sequence[int]],
        agents: Sequence[str] | None = None,
        objects: Sequence[str] | None = None,
    ) -> "PreferenceProfile":
        """Build from per-agent object index lists, best first."""
        n = len(orders)
        rank = []
        for order in orders:
            if sorted(order) != list(range(n)):
                raise ValueError(f"order {list(order)} is not a permutation of 0..{n - 1}")
            row = [0] * n
            for pos, o in enumerate(order):
                row[o] = pos + 1
            rank.append(tuple(row))
        agents = tuple(agents) if agents is not None else tuple(str(i + 1) for i in range(n))
        objects = tuple(objects) if objects is not None else default_object_names(n)
        return cls(agents, objects, tuple(rank))

    @classmethod
    def from_lists(
        cls,
        preferences: Sequence[Sequence[str]],
        agents: Sequence[str] | None = None,
        objects: Sequence[str] | None = None,
    ) -> "PreferenceProfile":
        """Build from per-agent lists of object identifiers, best first.

        >>> p = PreferenceProfile.from_lists(["abc", "abc", "bca"])
        >>> p.rank[2]
        (3, 1, 2)
        """
        if objects is None:
            objects = sorted({o for pref in preferences for o in pref})
        index = {o: k for k, o in enumerate(objects)}
        orders = []
        for i, pref in enumerate(preferences):
            pref = list(pref)
            seen = set()
            for o in pref:
                if o not in index:
                    raise ValueError(f"preference {i + 1} mentions unknown object {o!r}")
                if o in seen:
                    raise ValueError(f"preference {i + 1} lists object {o!r} twice")
                seen.add(o)
            if len(pref) != len(objects):
                raise ValueError(
                    f"preference {i + 1} ranks {len(pref)} objects, expected {len(objects)}"
                )
            orders.append([index[o] for o in pref])
        return cls.from_orders(orders, agents=agents, objects=objects)

    @property
    def n(self) -> int:
        return len(self.agents)

    def order(self, agent: AgentRef) -> tuple[int, ...]:
        """Object indices of ``agent``'s ranking, best first."""
        return self._orders[self.agent_index(agent)]

    @property
    def orders(self) -> tuple[tuple[int, ...], ...]:
        return self._orders

    def object_at(self, agent: AgentRef, k: int) -> int:
        """Index of the object ranked ``k`` (1-based) by ``agent``."""
        return self._orders[self.agent_index(agent)][k - 1]

    def agent_index(self, agent: AgentRef) -> int:
        if isinstance(agent, int) and not isinstance(agent, bool):
            if not 0 <= agent < self.n:
                raise IndexError(f"agent index {agent} out of range for n={self.n}")
            return agent
        try:
            return self.agents.index(agent)
        except ValueError:
            raise KeyError(f"unknown agent {agent!r}") from None

    def object_index(self, obj: int | str) -> int:
        if isinstance(obj, int) and not isinstance(obj, bool):
            if not 0 <= obj < self.n:
                raise IndexError(f"object index {obj} out of range for n={self.n}")
            return obj
        try:
            return self.objects.index(obj)
        except ValueError:
            raise KeyError(f"unknown object {obj!r}") from None

    def with_order(self, agent: AgentRef, order: Sequence[int]) -> "PreferenceProfile":
        """Return a copy where ``agent`` reports ``order`` instead."""
        i = self.agent_index(agent)
        orders = [list(o) for o in self._orders]
        orders[i] = list(order)
        return PreferenceProfile.from_orders(orders, self.agents, self.objects)

    def permute_agents(self, perm: Sequence[int]) -> "PreferenceProfile":
        """Agent ``j`` of the result is agent ``perm[j]`` of this profile."""
        return PreferenceProfile(
            tuple(self.agents[p] for p in perm),
            self.objects,
            tuple(self.rank[p] for p in perm),
        )

    def key(self) -> tuple[tuple[int, ...], ...]:
        """Hashable canonical form (the orders), ignoring identifiers."""
        return self._orders


def default_object_names(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("a") + k) for k in range(n))
    return tuple(f"o{k + 1}" for k in range(n))


@dataclass(frozen=True)
class Assignment:
    """An ``n x n`` bistochastic matrix of exact rationals (rows = agents)."""

    p: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.p)
        if n < 1:
            raise DimensionError("empty assignment")
        for row in self.p:
            if len(row) != n:
                raise DimensionError("assignment matrix must be square")
            for v in row:
                if not isinstance(v, Fraction):
                    raise TypeError("assignment entries must be Fractions")
                if v < 0 or v > 1:
                    raise ValueError(f"entry {v} outside [0, 1]")
            if sum(row) != 1:
                raise ValueError(f"row sums to {sum(row)}, not 1")
        for o in range(n):
            s = sum(row[o] for row in self.p)
            if s != 1:
                raise ValueError(f"column {o} sums to {s}, not 1")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[object]]) -> "Assignment":
        return cls(tuple(tuple(as_fraction(v) for v in row) for row in rows))

    @classmethod
    def uniform(cls, n: int) -> "Assignment":
        v = Fraction(1, n)
        return cls(tuple((v,) * n for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.p)

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.p[i]

    def support(self) -> list[tuple[int, int]]:
        return [(i, o) for i, row in enumerate(self.p) for o, v in enumerate(row) if v > 0]

    def permute_agents(self, perm: Sequence[int]) -> "Assignment":
        return Assignment(tuple(self.p[k] for k in perm))

    def as_floats(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.p]


@dataclass(frozen=True)
class DeterministicAssignment:
    """A bijection agent index -> object index."""

    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.perm)

    def to_assignment(self) -> Assignment:
        n = self.n
        return Assignment(
            tuple(tuple(ONE if o == self.perm[i] else ZERO for o in range(n)) for i in range(n))
        )

    def ranks(self, profile: PreferenceProfile) -> tuple[int, ...]:
        return tuple(profile.rank[i][o] for i, o in enumerate(self.perm))


@dataclass(frozen=True)
class CumulativeVector:
    """Bottom-up cumulative probabilities of one agent.

    ``b[k - 1]`` is the probability of receiving an object ranked ``k`` or worse,
    so ``b[0] == 1`` always.
    """

    agent: int
    b: tuple[Fraction, ...]

    def at(self, k: int) -> Fraction:
        """``b(k)`` with the convention ``b(n + 1) = 0``."""
        n = len(self.b)
        if k == n + 1:
            return ZERO
        if not 1 <= k <= n:
            raise IndexError(f"rank {k} outside 1..{n + 1}")
        return self.b[k - 1]

    def top(self, k: int) -> Fraction:
        """Probability of one of the ``k`` most preferred objects."""
        return ONE - self.at(k + 1)


@dataclass(frozen=True)
class SigmaOrder:
    """A processing order over the ranks ``2..n``."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.order) + 1
        if sorted(self.order) != list(range(2, n + 1)):
            raise ValueError(f"{self.order} is not an ordering of 2..{n}")

    @classmethod
    def rawlsian(cls, n: int) -> "SigmaOrder":
        return cls(tuple(range(n, 1, -1)))

    @classmethod
    def boston(cls, n: int) -> "SigmaOrder":
        return cls(tuple(range(2, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "SigmaOrder":
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(tok) for tok in text.split(",")))

    @property
    def n(self) -> int:
        return len(self.order) + 1


@dataclass(frozen=True)
class BlockVector:
    """Blocks of sorted cumulative values, one block per rank of ``order``."""

    order: tuple[int, ...]
    n: int
    entries: tuple[Fraction, ...]

    def blocks(self) -> list[tuple[Fraction, ...]]:
        n = self.n
        return [self.entries[j * n:(j + 1) * n] for j in range(len(self.order))]


class Dominance(enum.Enum):
    DOMINATES = "dominates"
    DOMINATED = "dominated"
    EQUAL = "equal"


def _check_dims(profile: PreferenceProfile, x: Assignment) -> None:
    if x.n != profile.n:
        raise DimensionError(f"assignment is {x.n}x{x.n} but the profile has n={profile.n}")


def cumulative_vector(profile: PreferenceProfile, x: Assignment, agent: AgentRef) -> CumulativeVector:
    """Return ``b(k)`` for ``k = 1..n``: mass on objects ranked ``k`` or worse.

    >>> p = PreferenceProfile.from_lists(["abc", "abc", "bca"])
    >>> x = Assignment.from_rows([["1/2", "1/2", 0], ["1/2", "1/2", 0], [0, 0, 1]])
    >>> [str(v) for v in cumulative_vector(p, x, 0).b]
    ['1', '1/2', '0']
    """
    _check_dims(profile, x)
    i = profile.agent_index(agent)
    row = x.p[i]
    acc = ZERO
    out = []
    for o in reversed(profile.orders[i]):
        acc += row[o]
        out.append(acc)
    out.reverse()
    return CumulativeVector(i, tuple(out))


def cumulative_matrix(profile: PreferenceProfile, x: Assignment) -> list[tuple[Fraction, ...]]:
    """Cumulative vectors of every agent, in agent order."""
    return [cumulative_vector(profile, x, i).b for i in range(profile.n)]


def block_vector(profile: PreferenceProfile, x: Assignment, sigma: SigmaOrder) -> BlockVector:
    _check_dims(profile, x)
    if sigma.n != profile.n:
        raise DimensionError(f"sigma covers n={sigma.n}, profile has n={profile.n}")
    cum = cumulative_matrix(profile, x)
    entries: list[Fraction] = []
    for k in sigma.order:
        entries.extend(sorted((b[k - 1] for b in cum), reverse=True))
    return BlockVector(sigma.order, profile.n, tuple(entries))


def r_dominates(bx: BlockVector, by: BlockVector) -> Dominance:
    """Compare two block vectors lexicographically (smaller is better)."""
    if len(bx.entries) != len(by.entries) or bx.order != by.order:
        raise DimensionError("block vectors built from different orders or sizes")
    for u, v in zip(bx.entries, by.entries):
        if u < v:
            return Dominance.DOMINATES
        if u > v:
            return Dominance.DOMINATED
    return Dominance.EQUAL


def top_masses(profile: PreferenceProfile, agent: AgentRef, row: Sequence[Number]) -> list[Fraction]:
    """Top-k masses of ``row`` under ``agent``'s ranking, ``k = 1..n``."""
    i = profile.agent_index(agent)
    if len(row) != profile.n:
        raise DimensionError(f"row has {len(row)} entries, expected {profile.n}")
    acc = ZERO
    out = []
    for o in profile.orders[i]:
        acc += row[o]
        out.append(acc)
    return out


def sd_dominates_allocation(
    profile: PreferenceProfile, agent: AgentRef, row_a: Sequence[Number], row_b: Sequence[Number]
) -> bool:
    """Weak first-order stochastic dominance of ``row_a`` over ``row_b`` for ``agent``."""
    ta = top_masses(profile, agent, row_a)
    tb = top_masses(profile, agent, row_b)
    return all(a >= b for a, b in zip(ta, tb))
