"""Deterministic 64-bit seed derivation.

Every randomized job (one mutant, one simulated input) gets its own seed
computed from the base seed and the job's coordinates, so results never
depend on the order jobs are scheduled in.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(base: int, *coords: int) -> int:
    """Fold ``coords`` into ``base`` one splitmix64 round at a time."""
    h = splitmix64(int(base) & MASK64)
    for c in coords:
        h = splitmix64(h ^ (int(c) & MASK64))
    return h
