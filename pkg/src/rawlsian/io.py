"""Reading and writing problems and assignments as JSON or CSV.

Rationals travel as ``"p/q"`` strings in lowest terms (integers as ``"0"`` or
``"1"``). Decimal copies are rounded half-even to six places and are for
display only.
"""

from __future__ import annotations

import csv
import decimal
import io
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .model import Assignment, PreferenceProfile, as_fraction
from .rules.cardinal import CardinalUtilityProfile

SCHEMA_VERSION = 1
DECIMAL_PLACES = 6


class InputError(ValueError):
    """A problem or assignment file is unreadable or violates the schema."""


def fmt_fraction(v: Fraction) -> str:
    return str(v)


def fmt_decimal(v: Fraction) -> float:
    with decimal.localcontext() as ctx:
        ctx.prec = 60
        d = decimal.Decimal(v.numerator) / decimal.Decimal(v.denominator)
        q = d.quantize(decimal.Decimal(1).scaleb(-DECIMAL_PLACES), rounding=decimal.ROUND_HALF_EVEN)
    return float(q)


def natural_key(name: str) -> list:
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def _parse_fraction(v: Any, where: str) -> Fraction:
    if isinstance(v, float):
        raise InputError(f"{where}: {v!r} is a float; write rationals as \"p/q\" strings or integers")
    try:
        return as_fraction(v)
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise InputError(f"{where}: cannot read {v!r} as a rational ({err})") from None


# problems ----------------------------------------------------------------


def _profile_from_lists(prefs: Sequence[Sequence[str]], agents: Sequence[str] | None,
                        objects: Sequence[str] | None, where: str) -> PreferenceProfile:
    if not prefs:
        raise InputError(f"{where}: no preferences")
    if objects is None:
        objects = sorted({o for p in prefs for o in p}, key=natural_key)
    if agents is None:
        agents = [str(i + 1) for i in range(len(prefs))]
    if len(agents) != len(prefs):
        raise InputError(f"{where}: {len(agents)} agents but {len(prefs)} preference lists")
    if len(objects) != len(agents):
        raise InputError(
            f"{where}: {len(agents)} agents but {len(objects)} objects; problems must be square"
        )
    known = set(objects)
    for i, pref in enumerate(prefs):
        seen = set()
        for o in pref:
            if o not in known:
                raise InputError(f"{where}: preference of agent {agents[i]!r} names unknown object {o!r}")
            if o in seen:
                raise InputError(f"{where}: preference of agent {agents[i]!r} repeats object {o!r}")
            seen.add(o)
        if len(seen) != len(objects):
            missing = sorted(known - seen, key=natural_key)
            raise InputError(f"{where}: preference of agent {agents[i]!r} misses {', '.join(missing)}")
    try:
        return PreferenceProfile.from_lists(prefs, agents=agents, objects=objects)
    except ValueError as err:
        raise InputError(f"{where}: {err}") from None


def problem_from_dict(data: dict, where: str = "problem") -> tuple[PreferenceProfile, CardinalUtilityProfile | None]:
    if not isinstance(data, dict):
        raise InputError(f"{where}: top level must be an object")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise InputError(f"{where}: unsupported schema_version {version!r}")
    prefs = data.get("preferences")
    if prefs is None:
        raise InputError(f"{where}: missing field 'preferences'")
    agents = data.get("agents")
    if isinstance(prefs, dict):
        agents = agents or list(prefs)
        try:
            prefs = [prefs[a] for a in agents]
        except KeyError as err:
            raise InputError(f"{where}: no preference list for agent {err.args[0]!r}") from None
    if not isinstance(prefs, list) or not all(isinstance(p, list) for p in prefs):
        raise InputError(f"{where}: 'preferences' must be a list of lists or an agent->list object")
    prefs = [[str(o) for o in p] for p in prefs]
    agents = [str(a) for a in agents] if agents is not None else None
    objects = data.get("objects")
    objects = [str(o) for o in objects] if objects is not None else None
    profile = _profile_from_lists(prefs, agents, objects, where)
    utilities = None
    if data.get("utilities") is not None:
        rows = data["utilities"]
        if len(rows) != profile.n or any(len(r) != profile.n for r in rows):
            raise InputError(f"{where}: 'utilities' must be {profile.n}x{profile.n}")
        utilities = CardinalUtilityProfile(tuple(
            tuple(_parse_fraction(v, f"{where}: utilities[{i}][{o}]") for o, v in enumerate(row))
            for i, row in enumerate(rows)
        ))
        try:
            utilities.check(profile)
        except ValueError as err:
            raise InputError(f"{where}: {err}") from None
    return profile, utilities


def problem_to_dict(profile: PreferenceProfile, utilities: CardinalUtilityProfile | None = None) -> dict:
    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "agents": list(profile.agents),
        "objects": list(profile.objects),
        "preferences": [[profile.objects[o] for o in order] for order in profile.orders],
    }
    if utilities is not None:
        out["utilities"] = [[fmt_fraction(v) for v in row] for row in utilities.u]
    return out


def problem_from_csv(text: str, where: str = "problem.csv") -> PreferenceProfile:
    """One row per agent: ``agent,<best>,...,<worst>``, after a mandatory header row.

    Objects are ordered naturally by identifier (``o2`` before ``o10``).
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise InputError(f"{where}: empty file")
    header = [c.strip().lower() for c in rows[0]]
    if not header or header[0] != "agent":
        raise InputError(f"{where}: line 1 must be a header starting with 'agent'")
    body = rows[1:]
    if not body:
        raise InputError(f"{where}: header but no agents")
    agents, prefs = [], []
    for line, row in enumerate(body, start=2):
        cells = [c.strip() for c in row]
        if len(cells) != len(header):
            raise InputError(f"{where}: line {line} has {len(cells)} fields, header has {len(header)}")
        agents.append(cells[0])
        prefs.append(cells[1:])
        if len(set(cells[1:])) != len(cells) - 1:
            dup = next(o for o in cells[1:] if cells[1:].count(o) > 1)
            raise InputError(f"{where}: line {line} (agent {cells[0]!r}) repeats object {dup!r}")
    return _profile_from_lists(prefs, agents, None, where)


def problem_to_csv(profile: PreferenceProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["agent"] + [str(k) for k in range(1, profile.n + 1)])
    for a, order in zip(profile.agents, profile.orders):
        w.writerow([a] + [profile.objects[o] for o in order])
    return buf.getvalue()


def _detect(path: Path, fmt: str | None) -> str:
    if fmt:
        return fmt
    return "csv" if path.suffix.lower() == ".csv" else "json"


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror}") from None


def parse_problem(path: str | Path, fmt: str | None = None
                  ) -> tuple[PreferenceProfile, CardinalUtilityProfile | None]:
    path = Path(path)
    text = _read(path)
    if _detect(path, fmt) == "csv":
        return problem_from_csv(text, str(path)), None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}") from None
    return problem_from_dict(data, str(path))


# assignments -------------------------------------------------------------


def assignment_to_dict(x: Assignment, agents: Sequence[str], objects: Sequence[str]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "agents": list(agents),
        "objects": list(objects),
        "assignment": [[fmt_fraction(v) for v in row] for row in x.p],
        "decimal": [[fmt_decimal(v) for v in row] for row in x.p],
    }


def assignment_from_dict(data: dict, where: str = "assignment") -> tuple[Assignment, list[str] | None, list[str] | None]:
    if not isinstance(data, dict) or "assignment" not in data:
        raise InputError(f"{where}: expected an object with an 'assignment' matrix")
    rows = data["assignment"]
    parsed = [
        [_parse_fraction(v, f"{where}: assignment[{i}][{o}]") for o, v in enumerate(row)]
        for i, row in enumerate(rows)
    ]
    try:
        x = Assignment(tuple(tuple(r) for r in parsed))
    except (ValueError, TypeError) as err:
        raise InputError(f"{where}: {err}") from None
    return x, data.get("agents"), data.get("objects")


def assignment_to_csv(x: Assignment, agents: Sequence[str], objects: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["agent"] + list(objects))
    for a, row in zip(agents, x.p):
        w.writerow([a] + [fmt_fraction(v) for v in row])
    return buf.getvalue()


def assignment_from_csv(text: str, where: str = "assignment.csv") -> tuple[Assignment, list[str], list[str]]:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows or rows[0][0].strip().lower() != "agent":
        raise InputError(f"{where}: line 1 must be a header 'agent,<object>,...'")
    objects = [c.strip() for c in rows[0][1:]]
    agents, parsed = [], []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(objects) + 1:
            raise InputError(f"{where}: line {line} has {len(row)} fields, expected {len(objects) + 1}")
        agents.append(row[0].strip())
        parsed.append([_parse_fraction(c.strip(), f"{where}: line {line}") for c in row[1:]])
    try:
        x = Assignment(tuple(tuple(r) for r in parsed))
    except (ValueError, TypeError) as err:
        raise InputError(f"{where}: {err}") from None
    return x, agents, objects


def parse_assignment(path: str | Path, fmt: str | None = None) -> tuple[Assignment, list[str] | None, list[str] | None]:
    path = Path(path)
    text = _read(path)
    if _detect(path, fmt) == "csv":
        return assignment_from_csv(text, str(path))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: invalid JSON at line {err.lineno}: {err.msg}") from None
    return assignment_from_dict(data, str(path))


def dumps_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"
