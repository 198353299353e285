"""Assignment rules and a name-based registry used by the CLI and the probes."""

from __future__ import annotations

from typing import Callable

from ..model import Assignment, PreferenceProfile, SigmaOrder
from .cardinal import CardinalUtilityProfile, maxmin_cardinal, min_utility
from .eating import fractional_boston, probabilistic_serial
from .mtav import MtavResult, bottleneck_rank, mtav, mtav_details
from .sigma import FixedLedger, SigmaResult, rawlsian, rawlsian_details, sigma_minimal, sigma_minimal_details

__all__ = [
    "CardinalUtilityProfile",
    "FixedLedger",
    "MtavResult",
    "RULE_NAMES",
    "SigmaResult",
    "bottleneck_rank",
    "fractional_boston",
    "get_rule",
    "maxmin_cardinal",
    "min_utility",
    "mtav",
    "mtav_details",
    "probabilistic_serial",
    "rawlsian",
    "rawlsian_details",
    "sigma_minimal",
    "sigma_minimal_details",
]

RULE_NAMES = ("rawlsian", "ps", "mtav", "sigma", "boston")

Rule = Callable[[PreferenceProfile], Assignment]


def get_rule(name: str, *, seed: int = 0, sigma: SigmaOrder | None = None) -> Rule:
    """Return ``profile -> Assignment`` for a rule name.

    ``mtav`` yields its matching as a 0/1 matrix. ``sigma`` needs ``sigma``.
    """
    if name == "rawlsian":
        return rawlsian
    if name == "ps":
        return probabilistic_serial
    if name == "boston":
        return fractional_boston
    if name == "mtav":
        return lambda p: mtav(p, seed).to_assignment()
    if name == "sigma":
        if sigma is None:
            raise ValueError("rule 'sigma' needs a sigma order")
        return lambda p: sigma_minimal(p, sigma)
    raise ValueError(f"unknown rule {name!r}; choose from {', '.join(RULE_NAMES)}")
