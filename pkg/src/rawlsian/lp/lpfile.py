"""Plain-text dump in CPLEX LP format, for cross-checking with other solvers.

Coefficients are written as decimals, so the dump is for diagnostics only.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .program import LinearProgram


def _name(v) -> str:
    if isinstance(v, tuple):
        v = "_".join(str(p) for p in v)
    return re.sub(r"[^A-Za-z0-9_]", "_", str(v))


def _expr(coeffs: dict[int, Fraction], names: list[str]) -> str:
    if not coeffs:
        return "0 " + names[0]
    parts = []
    for j, c in coeffs.items():
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {float(abs(c)):.12g} {names[j]}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def dumps(lp: LinearProgram) -> str:
    names = [_name(v) for v in lp.names]
    out = ["Minimize" if lp.sense == "min" else "Maximize", " obj: " + _expr(lp.objective, names), "Subject To"]
    for k, con in enumerate(lp.constraints):
        rel = {"<=": "<=", ">=": ">=", "=": "="}[con.relation]
        out.append(f" {_name(con.name or f'c{k}')}: {_expr(con.coeffs, names)} {rel} {float(con.rhs):.12g}")
    free = [names[j] for j, f in enumerate(lp.free) if f]
    if free:
        out.append("Bounds")
        out.extend(f" {v} free" for v in free)
    out.append("End")
    return "\n".join(out) + "\n"
