"""MTAV: minimise the worst assigned rank, then the rank sum, then break ties at random."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from ..model import DeterministicAssignment, PreferenceProfile
from ..seeding import rng_for


@dataclass(frozen=True)
class MtavResult:
    assignment: DeterministicAssignment
    bottleneck: int
    rank_sum: int


def has_perfect_matching(profile: PreferenceProfile, max_rank: int) -> bool:
    """Whether agents can all get objects they rank ``max_rank`` or better."""
    rank = np.asarray(profile.rank)
    graph = csr_matrix((rank <= max_rank).astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool((match >= 0).all())


def bottleneck_rank(profile: PreferenceProfile) -> int:
    """Smallest ``r`` admitting a perfect matching on edges of rank at most ``r``."""
    lo, hi = 1, profile.n
    while lo < hi:
        mid = (lo + hi) // 2
        if has_perfect_matching(profile, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def mtav_details(profile: PreferenceProfile, seed: int = 0) -> MtavResult:
    n = profile.n
    r_star = bottleneck_rank(profile)
    rank = np.asarray(profile.rank, dtype=np.int64)
    forbidden = n * n + 1  # more than any admissible rank sum
    cost = np.where(rank <= r_star, rank, forbidden)
    rng = rng_for(seed, "mtav")
    pa = rng.permutation(n)
    po = rng.permutation(n)
    rows, cols = linear_sum_assignment(cost[np.ix_(pa, po)])
    perm = [0] * n
    for a, b in zip(rows, cols):
        perm[pa[a]] = int(po[b])
    result = DeterministicAssignment(tuple(perm))
    ranks = result.ranks(profile)
    if max(ranks) != r_star:
        raise RuntimeError(f"min-cost matching reached rank {max(ranks)}, bottleneck is {r_star}")
    return MtavResult(result, r_star, sum(ranks))


def mtav(profile: PreferenceProfile, seed: int = 0) -> DeterministicAssignment:
    """One optimal MTAV matching, chosen by a seeded relabelling of agents and objects."""
    return mtav_details(profile, seed).assignment
