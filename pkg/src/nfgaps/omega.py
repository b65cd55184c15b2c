"""The limit region in [-1/2, 1/2]^(2D+1): membership, Monte Carlo volume,
and a deterministic quadrature cross-check for the interference-free case.

For an interference order D (the unique integer with 2/D < t <= 2/(D-1)),
the region consists of points (x, y_{-D+1}, ..., y_D) with x >= 0 such
that for every j != 0 the coordinate y_j avoids the closed interval

    [ y_0 + (j - lambda) * t/(4x),  y_0 + j * t/(4x) ].

Twice the Lebesgue measure of the region equals the limiting gap
distribution value G(t, lambda).  Membership is tested in the
division-free form (j - lambda) t <= 4 x (y_j - y_0) <= j t, which is
exact for x > 0 and extends continuously to the measure-zero slice x = 0.

Monte Carlo sampling draws each sample's coordinates from a counter-based
stream keyed by (seed, sample index), so the accept count is an integer
that does not depend on chunking, evaluation order, or thread count: the
estimate is reproducible bit for bit.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import PreconditionError

__all__ = [
    "OmegaSpec",
    "VolumeEstimate",
    "interference_order",
    "coordinate_offsets",
    "omega_contains",
    "counter_uniforms",
    "omega_volume",
    "omega_volume_quadrature",
    "write_volume_csv",
]

_MIN_SAMPLES = 10_000
_CHUNK = 1 << 20

# splitmix64 constants: golden-ratio increment and the Stafford mix13 finalizer
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def interference_order(t) -> int:
    """The unique D with 2/D < t <= 2/(D-1); D = 1 means t > 2.

    Boundaries t = 2/(D-1) belong to the larger D (e.g. t = 2 gives D = 2).
    Accepts exact rationals for exact boundary handling.
    """
    if isinstance(t, Fraction):
        if t <= 0:
            raise PreconditionError(f"t must be positive; got {t}")
        return (2 * t.denominator) // t.numerator + 1
    t = float(t)
    if t <= 0.0:
        raise PreconditionError(f"t must be positive; got {t}")
    return int(math.floor(2.0 / t)) + 1


def coordinate_offsets(D: int) -> list[int]:
    """Row offsets j = -D+1 .. D carried by the y coordinates, in order."""
    if D < 1:
        raise PreconditionError(f"D must be a positive integer; got {D}")
    return list(range(-D + 1, D + 1))


@dataclass(frozen=True)
class OmegaSpec:
    """Parameters (t, lambda, D) of one region; validates the t-range of D."""

    t: float
    lam: float
    D: int

    def __post_init__(self) -> None:
        if self.lam < 0.0:
            raise PreconditionError(f"lambda must be nonnegative; got {self.lam}")
        if self.D < 1:
            raise PreconditionError(f"D must be a positive integer; got {self.D}")
        lo = 2.0 / self.D
        hi = math.inf if self.D == 1 else 2.0 / (self.D - 1)
        if not (lo < self.t <= hi):
            raise PreconditionError(
                f"t={self.t} is outside (2/D, 2/(D-1)] = ({lo}, {hi}] for D={self.D}"
            )

    @classmethod
    def for_t(cls, t, lam: float) -> "OmegaSpec":
        return cls(t=float(t), lam=float(lam), D=interference_order(t))

    @property
    def dims(self) -> int:
        return 2 * self.D + 1


def omega_contains(x: float, ys: Sequence[float], t: float, lam: float, D: int) -> bool:
    """Membership test for one point (x, y_{-D+1}..y_D), y_0 included in ys.

    ys lists the 2D y-coordinates in ascending row offset, so y_0 sits at
    index D-1.  Coordinates must lie in the hypercube, x in [0, 1/2].
    The geometry is well-defined for any t > 0 and D >= 1, so unlike the
    volume estimators this test does not tie D to the canonical range of t.
    """
    t = float(t)
    lam = float(lam)
    D = int(D)
    if t <= 0.0:
        raise PreconditionError(f"t must be positive; got {t}")
    if lam < 0.0:
        raise PreconditionError(f"lambda must be nonnegative; got {lam}")
    if len(ys) != 2 * D:
        raise PreconditionError(f"expected {2 * D} y-coordinates; got {len(ys)}")
    if not (0.0 <= x <= 0.5):
        raise PreconditionError(f"x must lie in [0, 1/2]; got {x}")
    for y in ys:
        if not (-0.5 <= y <= 0.5):
            raise PreconditionError(f"y-coordinate {y} outside [-1/2, 1/2]")
    y0 = ys[D - 1]
    for j, yj in zip(coordinate_offsets(D), ys):
        if j == 0:
            continue
        v = 4.0 * x * (yj - y0)
        if (j - lam) * t <= v <= j * t:
            return False
    return True


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def counter_uniforms(seed: int, start: int, count: int, slots: int) -> np.ndarray:
    """Uniforms in [0, 1) for samples start..start+count-1, shape (slots, count).

    Value (i, s) is splitmix64 output number i*slots + s for the given
    seed: a pure function of (seed, sample index, slot), independent of
    how sampling is chunked or ordered.
    """
    if not (0 <= seed < 2 ** 64):
        raise PreconditionError(f"seed must be a 64-bit unsigned integer; got {seed}")
    idx = np.arange(start, start + count, dtype=np.uint64) * np.uint64(slots)
    out = np.empty((slots, count), dtype=np.float64)
    s = np.uint64(seed)
    for slot in range(slots):
        z = s + (idx + np.uint64(slot + 1)) * _GAMMA
        out[slot] = (_mix64(z) >> np.uint64(11)).astype(np.float64)
    out *= 2.0 ** -53
    return out


@dataclass(frozen=True)
class VolumeEstimate:
    """Monte Carlo estimate of twice the region volume with its binomial error.

    The sampling box {x in [0,1/2]} x [-1/2,1/2]^2D has volume 1/2, so the
    factor 2 in the target cancels against it and the acceptance ratio is
    the estimate itself; std_error is the plain binomial error of that ratio.
    """

    t: float
    lam: float
    D: int
    samples: int
    seed: int
    accepted: int

    @property
    def estimate(self) -> float:
        return self.accepted / self.samples

    @property
    def std_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.samples)


def _count_chunk(spec: OmegaSpec, seed: int, start: int, count: int) -> int:
    D, t, lam = spec.D, spec.t, spec.lam
    u = counter_uniforms(seed, start, count, 2 * D + 1)
    x4 = 2.0 * (1.0 - u[0])          # 4x with x = (1-u)/2 in (0, 1/2]
    y0 = u[D] - 0.5                  # slot D carries y_0 (offset j=0)
    ok = np.ones(count, dtype=bool)
    for slot, j in enumerate(coordinate_offsets(D), start=1):
        if j == 0:
            continue
        v = x4 * (u[slot] - 0.5 - y0)
        ok &= ~(((j - lam) * t <= v) & (v <= j * t))
    return int(np.count_nonzero(ok))


def omega_volume(t, lam: float, samples: int, seed: int,
                 threads: int | None = None, D: int | None = None) -> VolumeEstimate:
    """Monte Carlo estimate of twice the region volume.

    Deterministic in (samples, seed) regardless of threads: chunks have a
    fixed size and per-chunk accept counts are integers summed exactly.
    D defaults to the interference order of t; t < 1 (D >= 3) is supported
    and is the only evaluator available there.
    """
    if samples < _MIN_SAMPLES:
        raise PreconditionError(f"samples must be >= {_MIN_SAMPLES}; got {samples}")
    if D is None:
        D = interference_order(t)
    spec = OmegaSpec(t=float(t), lam=float(lam), D=D)
    seed = int(seed)
    if not (0 <= seed < 2 ** 64):
        raise PreconditionError(f"seed must be a 64-bit unsigned integer; got {seed}")
    starts = list(range(0, samples, _CHUNK))
    sizes = [min(_CHUNK, samples - s) for s in starts]
    if threads is None:
        threads = min(8, os.cpu_count() or 1)
    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda sc: _count_chunk(spec, seed, sc[0], sc[1]),
                                   zip(starts, sizes)))
    else:
        counts = [_count_chunk(spec, seed, s, c) for s, c in zip(starts, sizes)]
    return VolumeEstimate(t=spec.t, lam=spec.lam, D=spec.D,
                          samples=samples, seed=seed, accepted=sum(counts))


def _band_area(s: float) -> float:
    """Area of {(u, v) in [-1/2,1/2]^2 : v - u <= s}."""
    if s <= -1.0:
        return 0.0
    if s >= 1.0:
        return 1.0
    if s <= 0.0:
        return 0.5 * (1.0 + s) ** 2
    return 1.0 - 0.5 * (1.0 - s) ** 2


def omega_volume_quadrature(t: float, lam: float) -> float:
    """Deterministic volume for D = 1 (t > 2) via semi-analytic quadrature.

    The inner two coordinates integrate in closed form to a clipped band
    area, leaving a one-dimensional adaptive integral over x; absolute
    accuracy is well below 1e-8.
    """
    t = float(t)
    lam = float(lam)
    if t <= 2.0:
        raise PreconditionError(
            f"quadrature cross-check requires the interference-free range t > 2; got t={t}"
        )
    if lam < 0.0:
        raise PreconditionError(f"lambda must be nonnegative; got {lam}")

    def integrand(x: float) -> float:
        if x == 0.0:
            return 1.0 if lam <= 1.0 else 0.0
        return _band_area((1.0 - lam) * t / (4.0 * x))

    kink = abs(1.0 - lam) * t / 4.0
    pts = [kink] if 0.0 < kink < 0.5 else []
    val, _ = quad(integrand, 0.0, 0.5, points=pts, limit=200,
                  epsabs=1e-12, epsrel=1e-12)
    return 2.0 * val


def write_volume_csv(rows: Sequence[VolumeEstimate | tuple], path: str | Path) -> None:
    """Rows t,lambda,D,samples,seed,estimate,std_error.

    Quadrature results may be written as tuples (t, lam, D, value) and get
    samples=0, seed=0, std_error=0.
    """
    from .output import fmt_float

    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "lambda", "D", "samples", "seed", "estimate", "std_error"])
        for row in rows:
            if isinstance(row, VolumeEstimate):
                w.writerow([fmt_float(row.t), fmt_float(row.lam), row.D, row.samples,
                            row.seed, fmt_float(row.estimate), fmt_float(row.std_error)])
            else:
                t, lam, D, value = row
                w.writerow([fmt_float(t), fmt_float(lam), D, 0, 0,
                            fmt_float(value), fmt_float(0.0)])
