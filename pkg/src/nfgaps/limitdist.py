"""Closed-form limiting gap distribution G(t, lambda) and its density, t >= 1.

The limit is piecewise analytic on the strip [1, oo) x [0, oo): each tile
of a curved tessellation carries one branch formula.  For t >= 2 there are
four branches (ONE, C2, C3, ZERO at thresholds 1-2/t, 1, 1+2/t); for
1 <= t < 2 there are seven (H1..H7), with H2 reappearing for
4/3 <= t < 2 and H7 replacing it for 1 <= t < 4/3.

Every branch is transcribed once into a coefficient table of the shape

    G = (1/den) * [ sum_k p_k(t) lam^k
                    + (a + b lam) log(2/t)
                    + sum_i (a_i + b_i lam) log(u0_i + u1_i lam)
                    + c / (lam - 1) ]

and both the value and the analytic lambda-derivative are generated from
that table, so the density can never drift from the distribution.  The
products (a_i + b_i lam) log(u_i) have removable singularities where the
coefficient and the log argument vanish together (e.g. at lam = 1); these
evaluate to their limit 0, never by epsilon-fudging.

G is continuously differentiable in lambda except at lam = 1, where the
density has an integrable logarithmic spike.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from scipy.integrate import quad

from .errors import PreconditionError, SingularPointError

__all__ = [
    "Region",
    "classify_region",
    "thresholds",
    "branch_value",
    "branch_derivative",
    "limit_G",
    "limit_density",
    "tile_map",
    "integral_of_G",
    "write_curve_csv",
    "write_tiles_csv",
]


class Region(enum.Enum):
    """Branch tag for one tile of the (t, lambda) tessellation."""

    ONE = "ONE"
    C2 = "C2"
    C3 = "C3"
    ZERO = "ZERO"
    H1 = "H1"
    H2 = "H2"
    H3 = "H3"
    H4 = "H4"
    H5 = "H5"
    H6 = "H6"
    H7 = "H7"


@dataclass(frozen=True)
class _Branch:
    den: float
    poly: tuple[float, ...]                       # lam^k coefficients
    log_2t: tuple[float, float]                   # (a, b): (a + b lam) log(2/t)
    logs: tuple[tuple[float, float, float, float], ...]  # (a, b, u0, u1)
    inv_pole: float                               # c: c / (lam - 1)


def _branch_table(region: Region, t: float) -> _Branch:
    t2, t3, t4 = t * t, t ** 3, t ** 4
    if region is Region.ONE:
        return _Branch(1.0, (1.0,), (0.0, 0.0), (), 0.0)
    if region is Region.ZERO:
        return _Branch(1.0, (0.0,), (0.0, 0.0), (), 0.0)
    if region in (Region.C2, Region.H2):
        return _Branch(
            8.0,
            (4 + t2, -2 * t2, t2),
            (4 * t, -4 * t),
            ((-4 * t, 4 * t, 1.0, -1.0),),
            0.0,
        )
    if region is Region.C3:
        return _Branch(
            8.0,
            (4 - t2, 2 * t2, -t2),
            (4 * t, -4 * t),
            ((-4 * t, 4 * t, -1.0, 1.0),),
            0.0,
        )
    if region is Region.H1:
        return _Branch(
            2.0,
            (2.0, -t2),
            (0.0, -2 * t),
            ((-t, t, 1.0, -1.0), (t, t, 1.0, 1.0)),
            0.0,
        )
    if region is Region.H3:
        return _Branch(
            48.0,
            (8 + 12 * t + 6 * t2 + 4 * t3,
             -24 * t + 12 * t2 - 12 * t3,
             -6 * t2 + 9 * t3,
             -2 * t3),
            (48 * t, -24 * t),
            ((-24 * t, 24 * t, 1.0, -1.0), (-24 * t, 0.0, 2.0, -1.0)),
            0.0,
        )
    if region is Region.H4:
        return _Branch(
            48.0,
            (8 - 12 * t + 6 * t2 - t3, 12 * t2, -6 * t2),
            (48 * t, -24 * t),
            ((-24 * t, 24 * t, -1.0, 1.0),),
            0.0,
        )
    if region is Region.H5:
        return _Branch(
            576.0,
            (144 - 80 * t - 144 * t2 - 12 * t3 + 27 * t4,
             8 * t + 216 * t2 + 54 * t3 - 54 * t4,
             -72 * t2 - 36 * t3 + 36 * t4,
             6 * t3 - 10 * t4,
             t4),
            (384 * t, -240 * t),
            ((192 * t, -48 * t, 3.0, -1.0), (-288 * t, 288 * t, -1.0, 1.0)),
            0.0,
        )
    if region is Region.H6:
        return _Branch(
            576.0,
            (144 - 416 * t - 432 * t2 - 108 * t3 - 13 * t4,
             152 * t + 504 * t2 + 198 * t3 + 34 * t4,
             -144 * t2 - 108 * t3 - 30 * t4,
             18 * t3 + 10 * t4,
             -t4),
            (384 * t, -240 * t),
            ((-384 * t, 240 * t, -1.0, 1.0),),
            48 * t,
        )
    if region is Region.H7:
        return _Branch(
            48.0,
            (32 + 12 * t + 4 * t3,
             -24 * t - 12 * t3,
             -12 * t2 + 9 * t3,
             -2 * t3),
            (24 * t, -48 * t),
            ((-24 * t, 24 * t, 1.0, -1.0), (-24 * t, 0.0, 2.0, -1.0),
             (24 * t, 24 * t, 1.0, 1.0)),
            0.0,
        )
    raise ValueError(f"no branch table for {region}")


def _check_domain(t: float, lam: float) -> tuple[float, float]:
    t = float(t)
    lam = float(lam)
    if t < 1.0:
        raise PreconditionError(
            f"no closed form for t < 1 (use the omega volume estimators); got t={t}"
        )
    if lam < 0.0:
        raise PreconditionError(f"lambda must be nonnegative; got {lam}")
    return t, lam


def classify_region(t: float, lam: float) -> Region:
    """Active branch at (t, lambda); boundaries follow half-open conventions.

    The leading boundary of each row (lam <= first threshold) goes to the
    first branch; later thresholds belong to the branch on their right.
    Branch continuity makes the choice observationally irrelevant.
    """
    t, lam = _check_domain(t, lam)
    if t >= 2.0:
        if lam <= 1.0 - 2.0 / t:
            return Region.ONE
        if lam < 1.0:
            return Region.C2
        if lam < 1.0 + 2.0 / t:
            return Region.C3
        return Region.ZERO
    if t >= 4.0 / 3.0:
        if lam <= 2.0 / t - 1.0:
            return Region.H1
        if lam < 2.0 - 2.0 / t:
            return Region.H2
    else:
        if lam <= 2.0 - 2.0 / t:
            return Region.H1
        if lam < 2.0 / t - 1.0:
            return Region.H7
    if lam < 1.0:
        return Region.H3
    if lam < 3.0 - 2.0 / t:
        return Region.H4
    if lam < 2.0:
        return Region.H5
    if lam < 1.0 + 2.0 / t:
        return Region.H6
    return Region.ZERO


def thresholds(t: float) -> tuple[float, ...]:
    """Ascending branch boundaries in lambda for a given t >= 1."""
    t = float(t)
    if t < 1.0:
        raise PreconditionError(f"no closed form for t < 1; got t={t}")
    if t >= 2.0:
        cuts = [1.0 - 2.0 / t, 1.0, 1.0 + 2.0 / t]
    else:
        cuts = [2.0 / t - 1.0, 2.0 - 2.0 / t, 1.0, 3.0 - 2.0 / t, 2.0, 1.0 + 2.0 / t]
    return tuple(sorted(set(c for c in cuts if c > 0.0)))


def branch_value(region: Region, t: float, lam: float) -> float:
    """Evaluate one branch formula at (t, lambda).

    Valid on the branch's closed tile; log terms whose argument vanishes
    there have vanishing coefficients and contribute their limit 0.
    """
    t, lam = _check_domain(t, lam)
    br = _branch_table(region, t)
    acc = 0.0
    for k in range(len(br.poly) - 1, -1, -1):
        acc = acc * lam + br.poly[k]
    a, b = br.log_2t
    if a != 0.0 or b != 0.0:
        acc += (a + b * lam) * math.log(2.0 / t)
    for (ai, bi, u0, u1) in br.logs:
        u = u0 + u1 * lam
        coef = ai + bi * lam
        if u <= 0.0:
            if coef != 0.0:
                raise PreconditionError(
                    f"branch {region.value} evaluated outside its tile "
                    f"(log argument {u} <= 0 at lambda={lam})"
                )
            continue  # removable: coef -> 0 exactly where u -> 0
        acc += coef * math.log(u)
    if br.inv_pole:
        acc += br.inv_pole / (lam - 1.0)
    return acc / br.den


def branch_derivative(region: Region, t: float, lam: float) -> float:
    """Analytic d/dlambda of one branch, generated from the same table.

    At a boundary where a log argument hits 0 the derivative diverges; the
    signed infinity of the dominant log term is returned (this happens only
    at lambda = 1).
    """
    t, lam = _check_domain(t, lam)
    br = _branch_table(region, t)
    acc = 0.0
    for k in range(len(br.poly) - 1, 0, -1):
        acc = acc * lam + k * br.poly[k]
    _, b = br.log_2t
    if b != 0.0:
        acc += b * math.log(2.0 / t)
    for (ai, bi, u0, u1) in br.logs:
        u = u0 + u1 * lam
        if u <= 0.0:
            if bi != 0.0:
                return math.copysign(math.inf, -bi) / br.den
            continue
        acc += bi * math.log(u) + (ai + bi * lam) * u1 / u
    if br.inv_pole:
        acc -= br.inv_pole / (lam - 1.0) ** 2
    return acc / br.den


def limit_G(t: float, lam: float) -> float:
    """Limiting gap distribution: fraction of normalized gaps >= lambda."""
    return branch_value(classify_region(t, lam), float(t), float(lam))


def limit_density(t: float, lam: float, side: str | None = None) -> float:
    """Limiting gap density, -dG/dlambda, for lambda != 1.

    At the logarithmic spike lam = 1 a two-sided value does not exist;
    pass side="left" or side="right" for the one-sided limit (+inf).
    """
    t, lam = _check_domain(t, lam)
    if side not in (None, "left", "right"):
        raise PreconditionError(f"side must be None, 'left' or 'right'; got {side!r}")
    if lam == 1.0 and side is None:
        raise SingularPointError(
            "the density has a logarithmic spike at lambda = 1; "
            "request a one-sided value with side='left' or side='right'"
        )
    if lam == 1.0:
        # Both one-sided density limits diverge to +inf.
        region = classify_region(t, math.nextafter(1.0, 0.0 if side == "left" else 2.0))
    else:
        region = classify_region(t, lam)
    deriv = branch_derivative(region, t, lam)
    return 0.0 if deriv == 0.0 else -deriv


def tile_map(t_values: Sequence[float], lam_values: Sequence[float]) -> list[list[Region]]:
    """Region tags on the product grid; rows follow t_values."""
    return [[classify_region(t, lam) for lam in lam_values] for t in t_values]


def integral_of_G(t: float, epsabs: float = 1e-12) -> float:
    """Adaptive quadrature of G(t, .) over its support [0, 1 + 2/t]."""
    t = float(t)
    hi = 1.0 + 2.0 / t
    pts = [c for c in thresholds(t) if c < hi]
    val, _ = quad(lambda l: limit_G(t, l), 0.0, hi,
                  points=pts, limit=400, epsabs=epsabs, epsrel=1e-12)
    return val


def write_curve_csv(t: float, lam_values: Sequence[float], path: str | Path) -> None:
    """Rows lambda,G_limit,g_limit,region; the density column is inf at lambda=1."""
    from .output import fmt_float

    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "G_limit", "g_limit", "region"])
        for lam in lam_values:
            region = classify_region(t, lam)
            g = limit_G(t, lam)
            if lam == 1.0:
                dens = math.inf
            else:
                dens = limit_density(t, lam)
            w.writerow([fmt_float(lam), fmt_float(g), fmt_float(dens), region.value])


def write_tiles_csv(t_values: Sequence[float], lam_values: Sequence[float],
                    path: str | Path) -> None:
    from .output import fmt_float

    tiles = tile_map(t_values, lam_values)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "lambda", "region"])
        for t, row in zip(t_values, tiles):
            for lam, region in zip(lam_values, row):
                w.writerow([fmt_float(t), fmt_float(lam), region.value])
