"""Incentive diagnostics: obvious manipulability and the swap axioms.

Both work by recomputing a rule on altered reports. Supported ranks are always
measured with the agent's *true* ranking, whatever she reported.
"""

from __future__ import annotations

import itertools
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from ..model import Assignment, PreferenceProfile

Rule = Callable[[PreferenceProfile], Assignment]

DEFAULT_MAX_N = 3
HARD_MAX_N = 4


def worst_supported_rank(x: Assignment, true_rank: Sequence[int], i: int) -> int:
    return max(true_rank[o] for o in range(x.n) if x.p[i][o] > 0)


def best_supported_rank(x: Assignment, true_rank: Sequence[int], i: int) -> int:
    return min(true_rank[o] for o in range(x.n) if x.p[i][o] > 0)


@dataclass(frozen=True)
class ManipulationRecord:
    agent: int
    truth: tuple[int, ...]
    report: tuple[int, ...]
    worst_truthful: int  # max over others' reports of the worst supported rank
    worst_misreport: int
    best_truthful: int  # min over others' reports of the best supported rank
    best_misreport: int

    @property
    def lowers_worst_case(self) -> bool:
        return self.worst_misreport < self.worst_truthful

    @property
    def improves_best_case(self) -> bool:
        return self.best_misreport < self.best_truthful

    @property
    def obvious(self) -> bool:
        return self.lowers_worst_case or self.improves_best_case


@dataclass(frozen=True)
class PointwiseWitness:
    """A single opponent profile at which misreporting lowers the worst supported rank."""

    agent: int
    truth: tuple[int, ...]
    report: tuple[int, ...]
    others: tuple[tuple[int, ...], ...]
    worst_truthful: int
    worst_misreport: int


@dataclass
class ManipulationReport:
    n: int
    rule: str
    records: list[ManipulationRecord] = field(default_factory=list)
    pointwise: list[PointwiseWitness] = field(default_factory=list)
    profiles_evaluated: int = 0

    @property
    def obviously_manipulable(self) -> bool:
        return any(r.obvious for r in self.records)

    def obvious_manipulations(self) -> list[ManipulationRecord]:
        return [r for r in self.records if r.obvious]


def _ranks_of(order: Sequence[int]) -> list[int]:
    rank = [0] * len(order)
    for pos, o in enumerate(order):
        rank[o] = pos + 1
    return rank


def obvious_manipulability_probe(
    n: int,
    rule: Rule,
    *,
    rule_name: str = "",
    max_n: int = DEFAULT_MAX_N,
    agents: Sequence[int] | None = None,
    executor: Executor | None = None,
    keep_pointwise: int = 50,
) -> ManipulationReport:
    """Enumerate every profile, true ranking and misreport for small ``n``.

    Args:
        n: Number of agents and objects.
        rule: ``profile -> Assignment``.
        max_n: Refuse larger ``n`` (at most 4; ``n = 4`` means 24**4 profiles).
        agents: Agents to probe; all by default.
        executor: Evaluate the rule on the distinct profiles concurrently.
        keep_pointwise: Cap on stored pointwise witnesses.

    Raises:
        ValueError: if ``n`` exceeds ``max_n`` or ``max_n`` exceeds 4.
    """
    if max_n > HARD_MAX_N:
        raise ValueError(f"brute force is capped at n = {HARD_MAX_N}")
    if not 1 <= n <= max_n:
        raise ValueError(f"n = {n} outside the enumerable range 1..{max_n}")
    orders = list(itertools.permutations(range(n)))
    keys = list(itertools.product(orders, repeat=n))
    if executor is None:
        outputs = [rule(PreferenceProfile.from_orders(k)) for k in keys]
    else:
        outputs = list(executor.map(rule, [PreferenceProfile.from_orders(k) for k in keys]))
    cache = dict(zip(keys, outputs))
    report = ManipulationReport(n, rule_name, profiles_evaluated=len(cache))

    for i in (range(n) if agents is None else agents):
        for truth in orders:
            true_rank = _ranks_of(truth)
            per_report: dict[tuple[int, ...], list[tuple[int, int]]] = {}
            for report_order in orders:
                stats = []
                for others in itertools.product(orders, repeat=n - 1):
                    key = others[:i] + (report_order,) + others[i:]
                    x = cache[key]
                    stats.append((worst_supported_rank(x, true_rank, i), best_supported_rank(x, true_rank, i)))
                per_report[report_order] = stats
            truthful = per_report[truth]
            wt = max(w for w, _ in truthful)
            bt = min(b for _, b in truthful)
            for report_order in orders:
                if report_order == truth:
                    continue
                lie = per_report[report_order]
                report.records.append(ManipulationRecord(
                    i, truth, report_order, wt, max(w for w, _ in lie), bt, min(b for _, b in lie),
                ))
                if len(report.pointwise) < keep_pointwise:
                    for others, (w0, _), (w1, _) in zip(
                        itertools.product(orders, repeat=n - 1), truthful, lie
                    ):
                        if w1 < w0:
                            report.pointwise.append(
                                PointwiseWitness(i, truth, report_order, others, w0, w1)
                            )
                            break
    return report


def pointwise_worst_case(profile: PreferenceProfile, rule: Rule, agent: int,
                         report: Sequence[int]) -> tuple[int, int]:
    """Worst supported rank (true ranking) under truth and under ``report``, others fixed."""
    true_rank = profile.rank[agent]
    x = rule(profile)
    y = rule(profile.with_order(agent, report))
    return worst_supported_rank(x, true_rank, agent), worst_supported_rank(y, true_rank, agent)


@dataclass(frozen=True)
class SwapAxiomReport:
    agent: int
    a: int
    b: int
    before: tuple[Fraction, ...]
    after: tuple[Fraction, ...]
    swap_monotonic: bool
    upper_invariant: bool
    lower_invariant: bool


def swap_axiom_check(profile: PreferenceProfile, agent: int | str, a: int | str, b: int | str,
                     rule: Rule | None = None) -> SwapAxiomReport:
    """Swap adjacent ``a > b`` in ``agent``'s list and test the three axioms.

    Upper invariance looks at objects strictly above ``a`` and lower invariance
    at objects strictly below ``b``; swap monotonicity asks that the row be
    unchanged or that the probability of ``b`` rise.

    Raises:
        ValueError: if ``a`` is not ranked immediately above ``b``.
    """
    if rule is None:
        from ..rules.sigma import rawlsian as rule
    i = profile.agent_index(agent)
    ia, ib = profile.object_index(a), profile.object_index(b)
    order = list(profile.orders[i])
    ra, rb = profile.rank[i][ia], profile.rank[i][ib]
    if rb != ra + 1:
        raise ValueError(
            f"{profile.objects[ia]!r} and {profile.objects[ib]!r} are not adjacent with the first preferred"
        )
    order[ra - 1], order[rb - 1] = ib, ia
    before = rule(profile).p[i]
    after = rule(profile.with_order(i, order)).p[i]
    upper = profile.orders[i][: ra - 1]
    lower = profile.orders[i][rb:]
    return SwapAxiomReport(
        agent=i, a=ia, b=ib, before=before, after=after,
        swap_monotonic=before == after or after[ib] > before[ib],
        upper_invariant=all(before[o] == after[o] for o in upper),
        lower_invariant=all(before[o] == after[o] for o in lower),
    )


def adjacent_pairs(profile: PreferenceProfile, agent: int) -> list[tuple[int, int]]:
    order = profile.orders[agent]
    return list(zip(order, order[1:]))
