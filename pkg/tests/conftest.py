"""Shared fixtures and independent oracles for the test suite.

Oracles here are deliberately naive (direct enumeration, double loops,
finite differences) and never reuse the code paths they check.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest

from nfgaps import DEFAULT_GRID, angle_sequence, build_curve, empirical_G, normalized_gaps


def brute_force_curve(q: int, h: int, centered: bool = True) -> set[tuple[int, int]]:
    """Definitional enumeration: all (inv(n), inv(n+h)) with both gcds 1."""
    pts = set()
    J = (q - 1) // 2
    for n in range(q):
        if math.gcd(n, q) != 1 or math.gcd(n + h, q) != 1:
            continue
        x = _naive_inverse(n, q)
        y = _naive_inverse(n + h, q)
        if centered:
            x = x - q if x > J else x
            y = y - q if y > J else y
        pts.add((x, y))
    return pts


def _naive_inverse(n: int, q: int) -> int:
    n %= q
    for k in range(1, q):
        if (k * n) % q == 1:
            return k
    raise AssertionError(f"{n} not invertible mod {q}")


@lru_cache(maxsize=64)
def cached_gap_sample(q: int, h: int, t_text: str):
    """Shared (angle sequence, gap sample) for expensive configurations."""
    seq = angle_sequence(build_curve(q, h), Fraction(t_text))
    return seq, normalized_gaps(seq)


@lru_cache(maxsize=64)
def cached_empirical_curve(q: int, h: int, t_text: str) -> np.ndarray:
    _, gaps = cached_gap_sample(q, h, t_text)
    return empirical_G(gaps, DEFAULT_GRID.values())


@pytest.fixture(scope="session")
def lambda_grid() -> np.ndarray:
    return DEFAULT_GRID.values()
