"""Brute-force harness for character sums of fractional-linear tuples and
multidimensional box counting over a prime field.

The objects are tuples (r_1, ..., r_d) of reduced fractional-linear maps
r_j(x) = (a_j + b_j x) / (c_j + e_j x) over F_p with pairwise distinct
poles.  The harness evaluates complete and incomplete additive-character
sums exactly (poles omitted) and counts points in boxes, reporting the
deviation from the product main term normalized by sqrt(p) log^(d+1) p.

Bound-check constants used by callers (4d for complete sums, 8d log p for
incomplete ones, 5 for normalized box errors) are harness thresholds:
generous enough to be stable, tight enough that broken cancellation fails
loudly.  They are not sharp analytic constants.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .modcurve import is_prime, mod_inverse

__all__ = [
    "FracLinear",
    "FracLinearTuple",
    "Interval",
    "BoxSpec",
    "BoxCount",
    "neighbor_flip_tuple",
    "complete_sum",
    "incomplete_sum",
    "complete_sum_magnitudes",
    "geometric_interval_sum",
    "geometric_sum_bound",
    "box_count",
    "inverse_table",
    "write_sums_csv",
    "write_boxes_csv",
]


@lru_cache(maxsize=32)
def inverse_table(p: int) -> np.ndarray:
    """Inverses mod a prime p for 1..p-1 (index 0 unused), by the linear recurrence."""
    if not is_prime(p):
        raise PreconditionError(f"inverse table requires a prime modulus; got {p}")
    inv = np.zeros(p, dtype=np.int64)
    inv[1] = 1
    for i in range(2, p):
        inv[i] = (p - (p // i) * inv[p % i]) % p
    return inv


@dataclass(frozen=True)
class FracLinear:
    """One reduced map (a + b x) / (c + e x) over F_p.

    Reduced means the denominator has degree exactly one (e != 0) and does
    not divide the numerator (a e != b c), so the map is non-constant with
    a single pole at -c/e.
    """

    p: int
    a: int
    b: int
    c: int
    e: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise PreconditionError(f"modulus must be prime; got {self.p}")
        for name in ("a", "b", "c", "e"):
            object.__setattr__(self, name, getattr(self, name) % self.p)
        if self.e == 0:
            raise PreconditionError("denominator must have degree one (e != 0 mod p)")
        if (self.a * self.e - self.b * self.c) % self.p == 0:
            raise PreconditionError(
                f"map ({self.a}+{self.b}x)/({self.c}+{self.e}x) mod {self.p} "
                "is constant (numerator divides denominator)"
            )

    @property
    def pole(self) -> int:
        return (-self.c * mod_inverse(self.e, self.p)) % self.p

    def __call__(self, x: int) -> int:
        x = x % self.p
        den = (self.c + self.e * x) % self.p
        if den == 0:
            raise PreconditionError(f"x={x} is the pole of this map")
        return (self.a + self.b * x) * mod_inverse(den, self.p) % self.p

    def value_table(self) -> np.ndarray:
        """Values over x = 0..p-1; the pole slot holds -1."""
        inv = inverse_table(self.p)
        x = np.arange(self.p, dtype=np.int64)
        den = (self.c + self.e * x) % self.p
        vals = (self.a + self.b * x) % self.p * inv[den] % self.p
        vals[self.pole] = -1
        return vals


@dataclass(frozen=True)
class FracLinearTuple:
    """A tuple of reduced fractional-linear maps with pairwise distinct poles."""

    p: int
    funcs: tuple[FracLinear, ...]

    def __post_init__(self) -> None:
        if not self.funcs:
            raise PreconditionError("tuple must contain at least one map")
        if any(f.p != self.p for f in self.funcs):
            raise PreconditionError("all maps must share the tuple's modulus")
        poles = [f.pole for f in self.funcs]
        if len(set(poles)) != len(poles):
            raise PreconditionError(f"poles must be pairwise distinct; got {poles}")

    @property
    def d(self) -> int:
        return len(self.funcs)

    @property
    def poles(self) -> tuple[int, ...]:
        return tuple(f.pole for f in self.funcs)

    def value_tables(self) -> np.ndarray:
        """Stacked value tables, shape (d, p); pole slots hold -1."""
        return np.stack([f.value_table() for f in self.funcs])


def neighbor_flip_tuple(p: int, h: int, D: int) -> FracLinearTuple:
    """The 2D maps m -> (m+j) * (1 - h(m+j))^(-1) for row offsets j = -D+1..D.

    The offset-j map has its pole at h^(-1) - j, so the poles are distinct
    as soon as 2D < p.
    """
    if not is_prime(p):
        raise PreconditionError(f"modulus must be prime; got {p}")
    if h % p == 0:
        raise PreconditionError(f"shift h must be nonzero mod p; got h={h}, p={p}")
    if D < 1:
        raise PreconditionError(f"D must be a positive integer; got {D}")
    if 2 * D >= p:
        raise PreconditionError(f"need 2D < p for distinct poles; got D={D}, p={p}")
    funcs = tuple(
        FracLinear(p=p, a=j, b=1, c=1 - h * j, e=-h)
        for j in range(-D + 1, D + 1)
    )
    return FracLinearTuple(p=p, funcs=funcs)


def _phases(tup: FracLinearTuple, a: int, b: Sequence[int],
            xs: np.ndarray) -> np.ndarray:
    """Residues (a x + sum b_j r_j(x)) mod p over non-pole xs."""
    p = tup.p
    if len(b) != tup.d:
        raise PreconditionError(f"need {tup.d} coefficients b; got {len(b)}")
    tables = tup.value_tables()
    mask = np.ones(len(xs), dtype=bool)
    for pole in tup.poles:
        mask &= xs != pole
    xs = xs[mask]
    phase = (a % p) * xs % p
    for bj, table in zip(b, tables):
        phase = (phase + (bj % p) * table[xs]) % p
    return phase


def _unit_sum(phase: np.ndarray, p: int) -> complex:
    return complex(np.exp(2j * np.pi * (phase / p)).sum())


def complete_sum(tup: FracLinearTuple, a: int, b: Sequence[int]) -> complex:
    """Exact sum of e((a x + sum b_j r_j(x)) / p) over all non-pole x."""
    xs = np.arange(tup.p, dtype=np.int64)
    return _unit_sum(_phases(tup, a, b, xs), tup.p)


@dataclass(frozen=True)
class Interval:
    """Integer interval lo..hi inclusive inside [0, p-1]."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo < 0 or self.hi < self.lo:
            raise PreconditionError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def contains(self, values: np.ndarray) -> np.ndarray:
        return (values >= self.lo) & (values <= self.hi)


def incomplete_sum(tup: FracLinearTuple, a: int, b: Sequence[int],
                   window: Interval) -> complex:
    """The complete sum restricted to x in the window (poles still omitted)."""
    if window.hi >= tup.p:
        raise PreconditionError(
            f"window [{window.lo}, {window.hi}] exceeds the residue range of p={tup.p}"
        )
    xs = np.arange(window.lo, window.hi + 1, dtype=np.int64)
    return _unit_sum(_phases(tup, a, b, xs), tup.p)


def complete_sum_magnitudes(tup: FracLinearTuple) -> np.ndarray:
    """|S(a, b_1..b_d)| for every coefficient vector at once, shape (p,)*(d+1).

    Computed as one multidimensional DFT of the point-mass grid on
    (x, r_1(x), ..., r_d(x)); practical for p^(d+1) up to ~2e7.
    """
    p, d = tup.p, tup.d
    if p ** (d + 1) > 2 * 10 ** 7:
        raise PreconditionError(
            f"full magnitude grid p^(d+1) = {p ** (d + 1)} is too large; sample instead"
        )
    tables = tup.value_tables()
    xs = np.arange(p, dtype=np.int64)
    mask = np.ones(p, dtype=bool)
    for pole in tup.poles:
        mask &= xs != pole
    grid = np.zeros((p,) * (d + 1))
    grid[tuple([xs[mask]] + [t[xs[mask]] for t in tables])] = 1.0
    # ifftn uses e(+...) so this is S up to the overall 1/p^(d+1) factor
    return np.abs(np.fft.ifftn(grid)) * p ** (d + 1)


def geometric_interval_sum(p: int, a: int, window: Interval) -> complex:
    """Sum of e(a y / p) over y in the window, no pole exclusion."""
    ys = np.arange(window.lo, window.hi + 1, dtype=np.int64)
    return _unit_sum((a % p) * ys % p, p)


def geometric_sum_bound(p: int, a: int, length: int) -> float:
    """min(length, 1/(2 ||a/p||)) with ||.|| the distance to the nearest integer."""
    frac = (a % p) / p
    dist = min(frac, 1.0 - frac)
    if dist == 0.0:
        return float(length)
    return min(float(length), 1.0 / (2.0 * dist))


@dataclass(frozen=True)
class BoxSpec:
    """An x-window plus one value-window per map in the tuple."""

    x_window: Interval
    value_windows: tuple[Interval, ...]


@dataclass(frozen=True)
class BoxCount:
    """Exact box count with its deviation from the product main term."""

    p: int
    d: int
    count: int
    main_term: float

    @property
    def normalized_error(self) -> float:
        return (self.count - self.main_term) / (
            math.sqrt(self.p) * math.log(self.p) ** (self.d + 1)
        )


def box_count(tup: FracLinearTuple, box: BoxSpec) -> BoxCount:
    """Count x in the x-window with every r_k(x) in its value-window."""
    p = tup.p
    if len(box.value_windows) != tup.d:
        raise PreconditionError(
            f"need {tup.d} value windows; got {len(box.value_windows)}"
        )
    for w in (box.x_window, *box.value_windows):
        if w.hi >= p:
            raise PreconditionError(
                f"window [{w.lo}, {w.hi}] exceeds the residue range of p={p}"
            )
    xs = np.arange(p, dtype=np.int64)
    mask = box.x_window.contains(xs)
    tables = tup.value_tables()
    for table, w in zip(tables, box.value_windows):
        mask &= (table >= 0) & w.contains(table)
    count = int(np.count_nonzero(mask))
    main = box.x_window.length * math.prod(w.length for w in box.value_windows) / p ** tup.d
    return BoxCount(p=p, d=tup.d, count=count, main_term=main)


def write_sums_csv(rows: Sequence[tuple], path: str | Path) -> None:
    """Rows p,d,a,b1..bd,re,im,bound_ratio (one b column per tuple element)."""
    from .output import fmt_float

    if not rows:
        raise PreconditionError("no sum rows to write")
    d = len(rows[0][3])
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "d", "a"] + [f"b{k + 1}" for k in range(d)]
                   + ["re", "im", "bound_ratio"])
        for p, dd, a, b, value, ratio in rows:
            w.writerow([p, dd, a] + list(b)
                       + [fmt_float(value.real), fmt_float(value.imag), fmt_float(ratio)])


def write_boxes_csv(rows: Sequence[BoxCount], path: str | Path) -> None:
    from .output import fmt_float

    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "d", "count", "main_term", "normalized_error"])
        for r in rows:
            w.writerow([r.p, r.d, r.count, fmt_float(r.main_term),
                        fmt_float(r.normalized_error)])
