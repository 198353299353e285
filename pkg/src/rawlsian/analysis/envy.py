"""sd-envy between agents and pairwise comparisons of two rules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..model import Assignment, PreferenceProfile, _check_dims, sd_dominates_allocation


@dataclass(frozen=True)
class EnvyRecord:
    agent: int
    envies: tuple[int, ...]  # own allocation does not sd-dominate theirs
    weakly_envies: tuple[int, ...]  # theirs strictly sd-dominates own


@dataclass(frozen=True)
class EnvyReport:
    records: tuple[EnvyRecord, ...]

    @property
    def agents_with_envy(self) -> int:
        return sum(1 for r in self.records if r.envies)

    @property
    def agents_with_weak_envy(self) -> int:
        return sum(1 for r in self.records if r.weakly_envies)

    @property
    def violations(self) -> int:
        return sum(len(r.envies) for r in self.records)

    @property
    def average_envied(self) -> Fraction | None:
        """Mean number of envied agents over agents who envy someone."""
        enviers = [r for r in self.records if r.envies]
        if not enviers:
            return None
        return Fraction(sum(len(r.envies) for r in enviers), len(enviers))


def envy_report(profile: PreferenceProfile, x: Assignment) -> EnvyReport:
    _check_dims(profile, x)
    n = profile.n
    records = []
    for i in range(n):
        envies, weak = [], []
        for j in range(n):
            if i == j:
                continue
            if not sd_dominates_allocation(profile, i, x.p[i], x.p[j]):
                envies.append(j)
                if sd_dominates_allocation(profile, i, x.p[j], x.p[i]):
                    weak.append(j)
        records.append(EnvyRecord(i, tuple(envies), tuple(weak)))
    return EnvyReport(tuple(records))


@dataclass(frozen=True)
class PairwiseComparison:
    """How many agents strictly sd-prefer each side; the rest are tied or incomparable."""

    prefer_first: int
    prefer_second: int
    equal: int
    incomparable: int
    per_agent: tuple[str, ...]  # "first", "second", "equal" or "incomparable"


def compare_assignments(profile: PreferenceProfile, x: Assignment, y: Assignment) -> PairwiseComparison:
    labels = []
    for i in range(profile.n):
        if x.p[i] == y.p[i]:
            labels.append("equal")
        elif sd_dominates_allocation(profile, i, x.p[i], y.p[i]):
            labels.append("first")
        elif sd_dominates_allocation(profile, i, y.p[i], x.p[i]):
            labels.append("second")
        else:
            labels.append("incomparable")
    return PairwiseComparison(
        labels.count("first"), labels.count("second"), labels.count("equal"),
        labels.count("incomparable"), tuple(labels),
    )
