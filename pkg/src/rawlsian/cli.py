"""Command-line interface.

Exit codes: 0 success, 2 bad input or usage, 3 an internal cross-check failed.
Set ``RAWLSIAN_TRACE`` (e.g. ``DEBUG`` or ``INFO``) to log solver activity on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import analysis
from .analysis import OracleDisagreement
from .generate import MODELS, generate
from .io import (
    InputError,
    assignment_to_csv,
    assignment_to_dict,
    dumps_json,
    fmt_decimal,
    fmt_fraction,
    parse_assignment,
    parse_problem,
    problem_to_csv,
    problem_to_dict,
)
from .lp import LpVerificationError
from .model import Assignment, PreferenceProfile, SigmaOrder
from .report import build_report, cdf_csv, run_rules
from .rules import RULE_NAMES, get_rule, mtav_details, rawlsian_details, sigma_minimal_details
from .seeding import rng_for

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3
CHECKS = ("envy", "sd", "rank", "egalitarian", "maxrank")

log = logging.getLogger("rawlsian")


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _sigma_for(args, profile: PreferenceProfile) -> SigmaOrder | None:
    if args.sigma is None:
        return None
    try:
        sigma = SigmaOrder.parse(args.sigma)
    except ValueError as err:
        raise UsageError(f"--sigma: {err}") from None
    if sigma.n != profile.n:
        raise UsageError(f"--sigma covers ranks 2..{sigma.n} but the problem has n={profile.n}")
    return sigma


def cmd_solve(args) -> int:
    if args.sigma is not None and args.rule != "sigma":
        raise UsageError("--sigma only applies to --rule sigma")
    if args.rule == "sigma" and args.sigma is None:
        raise UsageError("--rule sigma needs --sigma k1,k2,...")
    profile, _ = parse_problem(args.input)
    extra: dict = {}
    if args.rule in ("rawlsian", "sigma"):
        sigma = _sigma_for(args, profile) or SigmaOrder.rawlsian(profile.n)
        res = (rawlsian_details(profile) if args.rule == "rawlsian"
               else sigma_minimal_details(profile, sigma))
        x = res.assignment
        extra = {"sigma": list(sigma.order), "lp_solves": res.lp_count}
    elif args.rule == "mtav":
        res = mtav_details(profile, args.seed)
        x = res.assignment.to_assignment()
        extra = {
            "seed": args.seed,
            "bottleneck_rank": res.bottleneck,
            "rank_sum": res.rank_sum,
            "matching": {profile.agents[i]: profile.objects[o] for i, o in enumerate(res.assignment.perm)},
        }
    else:
        x = get_rule(args.rule)(profile)
    if args.format == "csv":
        _emit(assignment_to_csv(x, profile.agents, profile.objects), args.out)
    else:
        data = {"rule": args.rule, **assignment_to_dict(x, profile.agents, profile.objects), **extra}
        _emit(dumps_json(data), args.out)
    return EXIT_OK


def _load_pair(args) -> tuple[PreferenceProfile, Assignment]:
    profile, _ = parse_problem(args.input)
    x, agents, objects = parse_assignment(args.assignment)
    if x.n != profile.n:
        raise InputError(f"assignment is {x.n}x{x.n} but the problem has n={profile.n}")
    if objects is not None and list(objects) != list(profile.objects):
        raise InputError("assignment columns do not match the problem's objects")
    if agents is not None and list(agents) != list(profile.agents):
        raise InputError("assignment rows do not match the problem's agents")
    return profile, x


def cmd_analyze(args) -> int:
    checks = _csv_list(args.checks)
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    profile, x = _load_pair(args)
    out: dict = {}
    ag, ob = profile.agents, profile.objects
    if "envy" in checks:
        env = analysis.envy_report(profile, x)
        avg = env.average_envied
        out["envy"] = {
            "agents_with_envy": env.agents_with_envy,
            "agents_with_weak_envy": env.agents_with_weak_envy,
            "average_envied": None if avg is None else fmt_fraction(avg),
            "envies": {ag[r.agent]: [ag[j] for j in r.envies] for r in env.records},
            "weakly_envies": {ag[r.agent]: [ag[j] for j in r.weakly_envies] for r in env.records},
        }
    if "sd" in checks:
        rep = analysis.sd_efficient(profile, x)
        out["sd"] = {
            "efficient": rep.efficient,
            "lp_gain": fmt_fraction(rep.lp_gain),
            "cycle": None if rep.cycle is None else [
                {"agent": ag[s.agent], "gives": ob[s.gives], "gets": ob[s.gets]} for s in rep.cycle
            ],
        }
    if "rank" in checks:
        dist = analysis.rank_distribution(profile, x)
        out["rank"] = {
            "at_or_worse": [fmt_fraction(v) for v in dist.m],
            "at_rank": [fmt_fraction(v) for v in dist.e],
            "rank_efficient": analysis.rank_efficient(profile, x),
        }
    if "egalitarian" in checks:
        rep = analysis.egalitarian_check(profile, x)
        out["egalitarian"] = {
            "egalitarian": rep.egalitarian,
            "agent": None if rep.agent is None else ag[rep.agent],
            "slack": fmt_fraction(rep.slack),
        }
    if "maxrank" in checks:
        out["maxrank"] = analysis.support_max_rank(profile, x)
    _emit(dumps_json(out), args.out)
    return EXIT_OK


def _executor(jobs: int):
    return ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None


def cmd_compare(args) -> int:
    rules = _csv_list(args.rules)
    if len(rules) < 2:
        raise UsageError("--rules needs at least two rule names")
    for r in rules:
        if r not in RULE_NAMES:
            raise UsageError(f"unknown rule {r!r}")
    profile, _ = parse_problem(args.input)
    sigma = _sigma_for(args, profile)
    if "sigma" in rules and sigma is None:
        raise UsageError("rule 'sigma' needs --sigma")
    ex = _executor(args.jobs)
    try:
        results = run_rules(profile, rules, args.seed, sigma, ex)
    finally:
        if ex:
            ex.shutdown()
    bundle = build_report(profile, results)
    out = {k: bundle[k] for k in ("rules", "pairwise", "rank_tables", "max_rank")}
    _emit(dumps_json(out), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    x, agents, objects = parse_assignment(args.assignment)
    agents = agents or [str(i + 1) for i in range(x.n)]
    objects = objects or [str(o + 1) for o in range(x.n)]
    dec = analysis.bvn_decompose(x)
    if dec.recompose() != x:
        raise OracleDisagreement("decomposition does not recompose to the input")
    terms = [
        {"weight": fmt_fraction(w), "decimal": fmt_decimal(w),
         "matching": {agents[i]: objects[o] for i, o in enumerate(m.perm)}}
        for w, m in dec.terms
    ]
    _emit(dumps_json({"terms": terms, "count": len(terms), "bound": x.n * x.n - 2 * x.n + 2}), args.out)
    return EXIT_OK


def cmd_probe(args) -> int:
    if args.manipulability == args.swaps:
        raise UsageError("choose exactly one of --manipulability or --swaps")
    rule = get_rule(args.rule, seed=args.seed)
    if args.manipulability:
        max_n = 4 if args.allow_n4 else 3
        try:
            rep = analysis.obvious_manipulability_probe(args.n, rule, rule_name=args.rule, max_n=max_n)
        except ValueError as err:
            raise UsageError(str(err)) from None
        out = {
            "rule": args.rule, "n": args.n,
            "profiles_evaluated": rep.profiles_evaluated,
            "obviously_manipulable": rep.obviously_manipulable,
            "obvious_manipulations": [
                {"agent": r.agent, "truth": list(r.truth), "report": list(r.report),
                 "worst": [r.worst_truthful, r.worst_misreport], "best": [r.best_truthful, r.best_misreport]}
                for r in rep.obvious_manipulations()
            ],
            "pointwise_worst_case_witnesses": [
                {"agent": w.agent, "truth": list(w.truth), "report": list(w.report),
                 "others": [list(o) for o in w.others], "worst": [w.worst_truthful, w.worst_misreport]}
                for w in rep.pointwise
            ],
        }
    else:
        rng = rng_for(args.seed, "probe", "swaps")
        tallies = {"swap_monotonic": 0, "upper_invariant": 0, "lower_invariant": 0}
        failures = []
        for t in range(args.count):
            profile = generate(args.n, "uniform", seed=int(rng.integers(2**31)))
            agent = int(rng.integers(args.n))
            pos = int(rng.integers(args.n - 1)) if args.n > 1 else None
            if pos is None:
                break
            order = profile.orders[agent]
            rep = analysis.swap_axiom_check(profile, agent, order[pos], order[pos + 1], rule)
            for key in tallies:
                if getattr(rep, key):
                    tallies[key] += 1
                elif len(failures) < 20:
                    failures.append({"trial": t, "axiom": key, "agent": agent,
                                     "preferences": [list(o) for o in profile.orders], "swap_position": pos + 1})
        out = {"rule": args.rule, "n": args.n, "trials": args.count, "holds": tallies, "failures": failures}
    _emit(dumps_json(out), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    weights = [float(w) for w in _csv_list(args.weights)] if args.weights else None
    try:
        profile = generate(args.n, args.model, args.seed, weights)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if args.format == "csv":
        _emit(problem_to_csv(profile), args.out)
    else:
        _emit(dumps_json(problem_to_dict(profile)), args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    rules = _csv_list(args.rules)
    for r in rules:
        if r not in RULE_NAMES or r == "sigma":
            raise UsageError(f"rule {r!r} not available in reports")
    profile, _ = parse_problem(args.input)
    ex = _executor(args.jobs)
    try:
        results = run_rules(profile, rules, args.seed, executor=ex)
    finally:
        if ex:
            ex.shutdown()
    _emit(dumps_json(build_report(profile, results)), args.out)
    if args.cdf:
        Path(args.cdf).write_text(cdf_csv(profile, results))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rawlsian", description="Fair random assignment rules and diagnostics.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute one rule's assignment")
    s.add_argument("--rule", required=True, choices=RULE_NAMES)
    s.add_argument("--sigma", help="rank order for --rule sigma, e.g. 2,3,4")
    s.add_argument("--input", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_solve)

    a = sub.add_parser("analyze", help="run diagnostics on an assignment")
    a.add_argument("--input", required=True)
    a.add_argument("--assignment", required=True)
    a.add_argument("--checks", default=",".join(CHECKS))
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("compare", help="compare rules agent by agent")
    c.add_argument("--input", required=True)
    c.add_argument("--rules", default="rawlsian,ps")
    c.add_argument("--sigma")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compare)

    d = sub.add_parser("decompose", help="write an assignment as a lottery over matchings")
    d.add_argument("--assignment", required=True)
    d.add_argument("--out")
    d.set_defaults(func=cmd_decompose)

    pr = sub.add_parser("probe", help="incentive diagnostics by brute force or random swaps")
    pr.add_argument("--manipulability", action="store_true")
    pr.add_argument("--swaps", action="store_true")
    pr.add_argument("--n", type=int, required=True)
    pr.add_argument("--rule", default="rawlsian", choices=[r for r in RULE_NAMES if r != "sigma"])
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--count", type=int, default=100, help="random swaps to test")
    pr.add_argument("--allow-n4", action="store_true", help="permit the n=4 brute force")
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_probe)

    g = sub.add_parser("gen", help="generate a synthetic problem")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--model", choices=MODELS, default="uniform")
    g.add_argument("--weights", help="comma-separated positive weights for plackett-luce")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("report", help="tables comparing several rules, plus rank CDF data")
    r.add_argument("--input", required=True)
    r.add_argument("--rules", default="rawlsian,ps,mtav")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--out")
    r.add_argument("--cdf", help="write the rank CDF series as CSV here")
    r.set_defaults(func=cmd_report)
    return p


def _configure_logging() -> None:
    level = os.environ.get("RAWLSIAN_TRACE")
    if not level:
        return
    value = getattr(logging, level.upper(), None)
    if not isinstance(value, int):
        value = logging.DEBUG
    logging.basicConfig(level=value, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, UsageError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (OracleDisagreement, LpVerificationError) as err:
        print(f"internal check failed: {err}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
