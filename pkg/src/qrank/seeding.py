"""Reproducible seed derivation (splitmix64)."""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def derive_seed(seed: int, *path: int) -> int:
    """``seed_i = splitmix64(seed_{i-1} ^ splitmix64(i))`` folded over ``path``."""
    s = splitmix64(int(seed) & _MASK)
    for p in path:
        s = splitmix64(s ^ splitmix64(int(p) & _MASK))
    return s
