"""Lotteries over matchings: Birkhoff-von Neumann decomposition and support checks."""

from __future__ import annotations

import graphlib
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from ..model import Assignment, DeterministicAssignment, PreferenceProfile, _check_dims


@dataclass(frozen=True)
class BvnDecomposition:
    terms: tuple[tuple[Fraction, DeterministicAssignment], ...]

    def recompose(self) -> Assignment:
        n = self.terms[0][1].n
        rows = [[Fraction(0)] * n for _ in range(n)]
        for w, m in self.terms:
            for i, o in enumerate(m.perm):
                rows[i][o] += w
        return Assignment(tuple(tuple(r) for r in rows))


def bvn_decompose(x: Assignment) -> BvnDecomposition:
    """Greedy decomposition: peel off a perfect matching of the support, weighted by its smallest entry."""
    n = x.n
    rest = [list(r) for r in x.p]
    terms = []
    left = Fraction(1)
    while left > 0:
        support = np.array([[1 if v > 0 else 0 for v in row] for row in rest], dtype=np.int8)
        match = maximum_bipartite_matching(csr_matrix(support), perm_type="column")
        if (match < 0).any():
            raise ValueError("support has no perfect matching; input is not bistochastic")
        perm = tuple(int(o) for o in match)
        w = min(rest[i][perm[i]] for i in range(n))
        for i in range(n):
            rest[i][perm[i]] -= w
        left -= w
        terms.append((w, DeterministicAssignment(perm)))
    return BvnDecomposition(tuple(terms))


def support_max_rank(profile: PreferenceProfile, x: Assignment) -> int:
    """Worst rank any agent receives with positive probability."""
    _check_dims(profile, x)
    return max(profile.rank[i][o] for i, o in x.support())


def trading_cycle(profile: PreferenceProfile, m: DeterministicAssignment) -> list[int] | None:
    """Agents who could swap objects around a cycle, each getting something better."""
    n = profile.n
    holder = {o: i for i, o in enumerate(m.perm)}
    preds: dict[int, set[int]] = {i: set() for i in range(n)}
    for i in range(n):
        own = profile.rank[i][m.perm[i]]
        for o in range(n):
            if profile.rank[i][o] < own:
                preds[holder[o]].add(i)  # i wants what holder[o] has
    try:
        graphlib.TopologicalSorter(preds).prepare()
    except graphlib.CycleError as err:
        return list(err.args[1])
    return None


@dataclass(frozen=True)
class CorollaryReport:
    holds: bool
    bottleneck: int
    term_max_ranks: tuple[int, ...]
    inefficient_terms: tuple[int, ...]


def corollary_check(profile: PreferenceProfile, x: Assignment | None = None) -> CorollaryReport:
    """Every matching in one decomposition of the Rawlsian assignment is Pareto-efficient and bottleneck-optimal."""
    from ..rules.mtav import bottleneck_rank
    from ..rules.sigma import rawlsian

    if x is None:
        x = rawlsian(profile)
    r_star = bottleneck_rank(profile)
    dec = bvn_decompose(x)
    ranks = tuple(max(m.ranks(profile)) for _, m in dec.terms)
    bad = tuple(t for t, (_, m) in enumerate(dec.terms) if trading_cycle(profile, m) is not None)
    return CorollaryReport(not bad and all(r == r_star for r in ranks), r_star, ranks, bad)
