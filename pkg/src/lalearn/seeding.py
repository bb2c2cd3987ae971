"""Deterministic seed derivation.

Every stochastic component in the package draws its randomness from a
``numpy`` generator seeded through :func:`derive_seed`.  Child seeds are
produced by hashing a master seed together with a path of labels and
counters (for example ``("tree", 17)`` or ``("cell", tau, q)``), so results
never depend on call order, scheduling, or worker count.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK64
    return h


def derive_seed(seed: int, *path: int | str) -> int:
    """Derive a child seed from ``seed`` and a path of labels/counters.

    The same ``(seed, path)`` always yields the same child seed, distinct
    paths yield (practically) independent ones.  Accepts non-negative
    integers and strings as path elements.
    """
    h = _splitmix64(int(seed) & _MASK64)
    for part in path:
        if isinstance(part, str):
            part = _fnv1a64(part)
        elif part < 0:
            raise ValueError(f"negative path element: {part}")
        h = _splitmix64(h ^ (int(part) & _MASK64))
    return h


def rng_for(seed: int, *path: int | str) -> np.random.Generator:
    """A fresh ``numpy`` generator for the given seed path."""
    return np.random.default_rng(derive_seed(seed, *path) if path else int(seed) & _MASK64)
