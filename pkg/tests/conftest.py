from __future__ import annotations

import itertools

import pytest
from hypothesis import strategies as st

from rawlsian.generate import generate
from rawlsian.model import Assignment, PreferenceProfile

ACCEPTANCE_LINES: dict[int, str] = {}


def P(*prefs: str) -> PreferenceProfile:
    return PreferenceProfile.from_lists(list(prefs))


def A(rows) -> Assignment:
    return Assignment.from_rows(rows)


def show(x: Assignment) -> list[list[str]]:
    return [[str(v) for v in row] for row in x.p]


@st.composite
def profiles(draw, min_n: int = 1, max_n: int = 4) -> PreferenceProfile:
    n = draw(st.integers(min_n, max_n))
    orders = [draw(st.permutations(list(range(n)))) for _ in range(n)]
    return PreferenceProfile.from_orders(orders)


def all_permutations(n: int):
    return list(itertools.permutations(range(n)))


def suite_profiles(count: int = 500, seed: int = 2024) -> list[PreferenceProfile]:
    """Half uniform, half correlated (Plackett-Luce), n cycling through 2..8."""
    out = []
    for t in range(count):
        n = 2 + t % 7
        model = "uniform" if t % 2 == 0 else "plackett-luce"
        out.append(generate(n, model, seed=seed * 100000 + t))
    return out


@pytest.fixture(scope="session")
def suite():
    from rawlsian.rules import rawlsian_details

    profs = suite_profiles()
    return [(p, rawlsian_details(p)) for p in profs]


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
