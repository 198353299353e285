"""Comparison bundles across rules: tables of ranks, envy and pairwise preferences."""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import Executor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .analysis import compare_assignments, envy_report, rank_distribution, support_max_rank
from .io import assignment_to_dict, fmt_decimal, fmt_fraction
from .model import Assignment, PreferenceProfile, SigmaOrder
from .rules import get_rule

DEFAULT_RULES = ("rawlsian", "ps", "mtav")


def run_rule(name: str, profile: PreferenceProfile, seed: int = 0,
             sigma: SigmaOrder | None = None) -> Assignment:
    """Module-level so it can be shipped to worker processes."""
    return get_rule(name, seed=seed, sigma=sigma)(profile)


def run_rules(profile: PreferenceProfile, rules: Sequence[str], seed: int = 0,
              sigma: SigmaOrder | None = None, executor: Executor | None = None) -> dict[str, Assignment]:
    """Evaluate several rules; results are keyed in the order requested."""
    if executor is None:
        results = [run_rule(r, profile, seed, sigma) for r in rules]
    else:
        futures = [executor.submit(run_rule, r, profile, seed, sigma) for r in rules]
        results = [f.result() for f in futures]
    return dict(zip(rules, results))


def _num(v: Fraction) -> dict:
    return {"exact": fmt_fraction(v), "decimal": fmt_decimal(v)}


def pairwise_table(profile: PreferenceProfile, results: dict[str, Assignment]) -> list[dict]:
    rows = []
    for r1, r2 in itertools.combinations(results, 2):
        c = compare_assignments(profile, results[r1], results[r2])
        rows.append({
            "first": r1, "second": r2,
            "prefer_first": c.prefer_first, "prefer_second": c.prefer_second,
            "equal": c.equal, "incomparable": c.incomparable,
            "per_agent": dict(zip(profile.agents, c.per_agent)),
        })
    return rows


def rank_tables(profile: PreferenceProfile, results: dict[str, Assignment]) -> dict:
    out = {}
    for name, x in results.items():
        dist = rank_distribution(profile, x)
        out[name] = {
            "expected_at_rank": [_num(v) for v in dist.e],
            "expected_at_or_worse": [_num(v) for v in dist.m],
        }
    return out


def build_report(profile: PreferenceProfile, results: dict[str, Assignment]) -> dict:
    n = profile.n
    bundle: dict = {"n": n, "rules": list(results), "assignments": {}, "max_rank": {}, "envy": {}}
    for name, x in results.items():
        bundle["assignments"][name] = assignment_to_dict(x, profile.agents, profile.objects)
        mr = support_max_rank(profile, x)
        bundle["max_rank"][name] = {"max_rank": mr, "percent_of_n": round(100 * mr / n, 1)}
        env = envy_report(profile, x)
        avg = env.average_envied
        bundle["envy"][name] = {
            "agents_with_envy": env.agents_with_envy,
            "percent_with_envy": round(100 * env.agents_with_envy / n, 1),
            "agents_with_weak_envy": env.agents_with_weak_envy,
            "average_envied": None if avg is None else _num(avg),
        }
    bundle["rank_tables"] = rank_tables(profile, results)
    bundle["pairwise"] = pairwise_table(profile, results)
    bundle["rank_cdf"] = cdf_series(profile, results)
    return bundle


def cdf_series(profile: PreferenceProfile, results: dict[str, Assignment]) -> list[dict]:
    """Expected number of agents at rank ``k`` or better, per rule."""
    cdfs = {name: rank_distribution(profile, x).cdf() for name, x in results.items()}
    return [
        {"rank": k + 1, **{name: fmt_decimal(c[k]) for name, c in cdfs.items()}}
        for k in range(profile.n)
    ]


def cdf_csv(profile: PreferenceProfile, results: dict[str, Assignment]) -> str:
    cdfs = {name: rank_distribution(profile, x).cdf() for name, x in results.items()}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank"] + [f"{name}_exact" for name in cdfs] + [f"{name}_decimal" for name in cdfs])
    for k in range(profile.n):
        w.writerow([k + 1] + [fmt_fraction(c[k]) for c in cdfs.values()]
                   + [f"{fmt_decimal(c[k]):.6f}" for c in cdfs.values()])
    return buf.getvalue()


@dataclass(frozen=True)
class Bundle:
    report: dict
    cdf_csv: str


def report_bundle(profile: PreferenceProfile, rules: Sequence[str] = DEFAULT_RULES, seed: int = 0,
                  executor: Executor | None = None) -> Bundle:
    results = run_rules(profile, rules, seed, executor=executor)
    return Bundle(build_report(profile, results), cdf_csv(profile, results))
