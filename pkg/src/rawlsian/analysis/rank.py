"""Rank distributions, rank dominance and rank efficiency."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..lp import LinearProgram, Status, build_bistochastic, solve, xvar
from ..model import Assignment, PreferenceProfile, _check_dims, cumulative_matrix
from .efficiency import OracleDisagreement

BRUTE_FORCE_MAX_N = 5


@dataclass(frozen=True)
class RankDistribution:
    """``m[k-1]``: expected number of agents at rank ``k`` or worse.

    ``e[k-1]``: expected number of agents at exactly rank ``k``.
    """

    m: tuple[Fraction, ...]
    e: tuple[Fraction, ...]

    def at(self, k: int) -> Fraction:
        return self.m[k - 1] if k <= len(self.m) else Fraction(0)

    def cdf(self) -> list[Fraction]:
        """Expected number of agents at rank ``k`` or better, ``k = 1..n``."""
        out, acc = [], Fraction(0)
        for v in self.e:
            acc += v
            out.append(acc)
        return out


def rank_distribution(profile: PreferenceProfile, x: Assignment) -> RankDistribution:
    cum = cumulative_matrix(profile, x)
    n = profile.n
    m = tuple(sum((b[k] for b in cum), Fraction(0)) for k in range(n))
    e = tuple(m[k] - (m[k + 1] if k + 1 < n else 0) for k in range(n))
    return RankDistribution(m, e)


def rank_dominates(profile: PreferenceProfile, x: Assignment, y: Assignment) -> bool:
    """Whether ``x`` rank-dominates ``y``: fewer expected agents at every tail, strictly once."""
    mx = rank_distribution(profile, x).m
    my = rank_distribution(profile, y).m
    return all(a <= b for a, b in zip(mx, my)) and mx != my


def _rank_terms(profile: PreferenceProfile, k: int) -> dict:
    n = profile.n
    return {xvar(i, o): 1 for i in range(n) for o in profile.orders[i][k - 1:]}


def rank_improvement_lp(profile: PreferenceProfile, x: Assignment, method: str | None = None) -> Fraction:
    """Largest total tail reduction any assignment achieves over ``x``."""
    n = profile.n
    mx = rank_distribution(profile, x).m
    lp = build_bistochastic(n)
    obj = {}
    for k in range(2, n + 1):
        d = ("d", k)
        lp.add_variable(d)
        terms = _rank_terms(profile, k)
        terms[d] = 1
        lp.add_constraint(terms, "<=", mx[k - 1], f"tail{k}")
        obj[d] = 1
    if not obj:
        return Fraction(0)
    lp.maximize(obj)
    sol = solve(lp, method)
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"rank LP ended {sol.status.value}")
    return sol.objective


def rank_improvement_by_permutations(profile: PreferenceProfile, x: Assignment,
                                     method: str | None = None) -> Fraction:
    """Same quantity as :func:`rank_improvement_lp`, over mixtures of all ``n!`` matchings."""
    n = profile.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"permutation enumeration is limited to n <= {BRUTE_FORCE_MAX_N}")
    mx = rank_distribution(profile, x).m
    perms = list(itertools.permutations(range(n)))
    tails = []
    for perm in perms:
        ranks = [profile.rank[i][perm[i]] for i in range(n)]
        tails.append([sum(1 for r in ranks if r >= k) for k in range(1, n + 1)])
    lp = LinearProgram()
    for p in range(len(perms)):
        lp.add_variable(("lam", p))
    lp.add_constraint({("lam", p): 1 for p in range(len(perms))}, "=", 1, "mix")
    obj = {}
    for k in range(2, n + 1):
        d = ("d", k)
        lp.add_variable(d)
        terms = {("lam", p): tails[p][k - 1] for p in range(len(perms)) if tails[p][k - 1]}
        terms[d] = 1
        lp.add_constraint(terms, "<=", mx[k - 1], f"tail{k}")
        obj[d] = 1
    if not obj:
        return Fraction(0)
    lp.maximize(obj)
    sol = solve(lp, method)
    if sol.status is not Status.OPTIMAL:
        raise RuntimeError(f"mixture LP ended {sol.status.value}")
    return sol.objective


def rank_efficient(profile: PreferenceProfile, x: Assignment, method: str | None = None,
                   cross_check: bool | None = None) -> bool:
    """No assignment rank-dominates ``x``.

    Args:
        cross_check: Also run the permutation-mixture LP and require agreement.
            Defaults to on for ``n <= 5``.
    """
    _check_dims(profile, x)
    gain = rank_improvement_lp(profile, x, method)
    if cross_check is None:
        cross_check = profile.n <= BRUTE_FORCE_MAX_N
    if cross_check:
        other = rank_improvement_by_permutations(profile, x, method)
        if other != gain:
            raise OracleDisagreement(f"rank LP gain {gain} vs permutation mixture {other}")
    return gain == 0
