"""Synthetic preference profiles."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .model import PreferenceProfile
from .seeding import rng_for

MODELS = ("uniform", "plackett-luce")


def generate(n: int, model: str = "uniform", seed: int = 0,
             weights: Sequence[float] | None = None) -> PreferenceProfile:
    """Draw ``n`` independent rankings of ``n`` objects.

    ``uniform`` draws each ranking uniformly. ``plackett-luce`` picks objects
    one at a time with probability proportional to a shared weight, which
    correlates agents' rankings. Without explicit weights it uses
    ``1, 1/2, ..., 1/n``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = rng_for(seed, "generate", model)
    if model == "uniform":
        orders = [rng.permutation(n).tolist() for _ in range(n)]
    elif model == "plackett-luce":
        w = np.array(weights if weights is not None else [1 / (k + 1) for k in range(n)], dtype=float)
        if w.shape != (n,):
            raise ValueError(f"expected {n} weights, got {w.size}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("weights must be positive and finite")
        # Gumbel-max: sorting log-weights plus Gumbel noise samples a PL ranking
        logw = np.log(w)
        orders = [np.argsort(-(logw + rng.gumbel(size=n)), kind="stable").tolist() for _ in range(n)]
    else:
        raise ValueError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    return PreferenceProfile.from_orders(orders)
