"""Eating procedures: probabilistic serial and fractional Boston.

Both are simulated event by event with exact rational clocks, so simultaneous
exhaustions are handled in a single step.
"""

from __future__ import annotations

from fractions import Fraction

from ..model import Assignment, PreferenceProfile

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _freeze(rows: list[list[Fraction]]) -> Assignment:
    return Assignment(tuple(tuple(r) for r in rows))


def probabilistic_serial(profile: PreferenceProfile) -> Assignment:
    """Simultaneous unit-speed eating, each agent on their best object with supply left.

    >>> p = PreferenceProfile.from_lists(["abc", "abc", "bca"])
    >>> [[str(v) for v in r] for r in probabilistic_serial(p).p]
    [['1/2', '1/6', '1/3'], ['1/2', '1/6', '1/3'], ['0', '2/3', '1/3']]
    """
    n = profile.n
    orders = profile.orders
    supply = [_ONE] * n
    x = [[_ZERO] * n for _ in range(n)]
    ptr = [0] * n  # position in each agent's list of the object she is eating
    clock = _ZERO
    while clock < 1:
        eaters: dict[int, list[int]] = {}
        for i in range(n):
            while supply[orders[i][ptr[i]]] == 0:
                ptr[i] += 1
            eaters.setdefault(orders[i][ptr[i]], []).append(i)
        dt = min(min(supply[o] / len(who) for o, who in eaters.items()), 1 - clock)
        for o, who in eaters.items():
            for i in who:
                x[i][o] += dt
            supply[o] -= dt * len(who)
        clock += dt
    return _freeze(x)


def fractional_boston(profile: PreferenceProfile) -> Assignment:
    """Round-based eating: in round ``k`` every unsatisfied agent eats their ``k``-th choice.

    An agent stops when that object runs out or their total reaches one; whoever
    has a full unit at the end of the round leaves.
    """
    n = profile.n
    orders = profile.orders
    supply = [_ONE] * n
    x = [[_ZERO] * n for _ in range(n)]
    need = [_ONE] * n
    remaining = set(range(n))
    for k in range(n):
        active = {i for i in remaining if supply[orders[i][k]] > 0}
        while active:
            counts: dict[int, int] = {}
            for i in active:
                o = orders[i][k]
                counts[o] = counts.get(o, 0) + 1
            dt = min(
                min(supply[o] / c for o, c in counts.items()),
                min(need[i] for i in active),
            )
            for i in active:
                o = orders[i][k]
                x[i][o] += dt
                need[i] -= dt
            for o, c in counts.items():
                supply[o] -= dt * c
            active = {i for i in active if need[i] > 0 and supply[orders[i][k]] > 0}
        remaining = {i for i in remaining if need[i] > 0}
        if not remaining:
            break
    return _freeze(x)
