"""Derive independent random streams from one global seed."""

from __future__ import annotations

import zlib

import numpy as np


def rng_for(seed: int, *key: str | int) -> np.random.Generator:
    """Generator for the stream named by ``key`` under ``seed``.

    Streams with different keys are independent; the same ``(seed, key)``
    always reproduces the same draws.
    """
    spawn = tuple(zlib.crc32(k.encode()) if isinstance(k, str) else int(k) for k in key)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=spawn))
