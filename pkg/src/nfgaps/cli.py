"""Command-line surface: every module as a subcommand with reproducible
file outputs and a run manifest.

Exit codes: 0 success, 2 validation error (the violated precondition is
printed verbatim), 1 runtime failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .angles import (angle_sequence, empirical_G, gap_per_point, normalized_gaps,
                     write_gap_grid_csv, write_gap_per_point_csv, write_run_header_json)
from .errors import PreconditionError
from .experiments import (DEFAULT_GRID, LambdaGrid, composite_contrast,
                          convergence_scan, empirical_gap_curve,
                          equidistribution_check, exponential_limit_scan,
                          h_independence, write_curve_csv, write_report_json)
from .expsum import (BoxSpec, Interval, box_count, complete_sum, incomplete_sum,
                     neighbor_flip_tuple, write_boxes_csv, write_sums_csv)
from .limitdist import write_curve_csv as write_limit_csv
from .limitdist import write_tiles_csv
from .modcurve import build_curve, build_nf_curve, nf_union, write_points_csv, write_sidecar_json
from .omega import interference_order, omega_volume, omega_volume_quadrature, write_volume_csv
from .output import write_manifest

_OUT_ENV = "NFGAPS_OUT"


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"{text!r} is not a rational number (use e.g. '2.76' or '69/25')")


def _grid(text: str) -> LambdaGrid:
    return LambdaGrid.from_spec(text)


def _interval(text: str) -> Interval:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"interval must look like 'lo:hi'; got {text!r}")
    return Interval(lo=lo, hi=hi)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="nfgaps",
        description="Inverse-pair modular curves and their angular gap statistics",
    )
    top.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def add_shared(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None,
                       help=f"output directory (default ${_OUT_ENV} or ./nfgaps-out)")
        p.add_argument("--seed", type=int, default=42, help="64-bit RNG seed")
        p.add_argument("--threads", type=int, default=None,
                       help="worker thread cap (results do not depend on it)")

    p = sub.add_parser("curve", help="export a modular curve (or the union over shifts)")
    add_shared(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--h", type=int, default=None, help="shift (required unless --union)")
    p.add_argument("--raw", action="store_true",
                   help="raw representatives in [0, q-1] instead of centered")
    p.add_argument("--union", action="store_true",
                   help="export the raw curves for every shift h = 0..q-1")

    p = sub.add_parser("gaps", help="empirical gap distribution for one (q, h, t)")
    add_shared(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--t", type=_fraction, required=True,
                   help="observer parameter; decimals parse exactly")
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID, metavar="LO:HI:STEP")
    p.add_argument("--per-point", action="store_true",
                   help="also export per-point carried gaps (x,y,gap)")

    p = sub.add_parser("limit", help="closed-form limit distribution and density")
    add_shared(p)
    p.add_argument("--t", type=_fraction, required=True)
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID, metavar="LO:HI:STEP")
    p.add_argument("--tile-t", type=_grid, default=None, metavar="LO:HI:STEP",
                   help="also export the region map on this t-grid")
    p.add_argument("--tile-lambda", type=_grid, default=None, metavar="LO:HI:STEP")

    p = sub.add_parser("omega", help="Monte Carlo / quadrature volume of the limit region")
    add_shared(p)
    p.add_argument("--t", type=_fraction, required=True)
    p.add_argument("--lambda", dest="lam", type=float, nargs="+", required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--quadrature", action="store_true",
                   help="also run the deterministic quadrature (t > 2 only)")

    p = sub.add_parser("expsum", help="character sums and box counts for inverse-pair tuples")
    add_shared(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--D", type=int, default=1)
    p.add_argument("--sum-a", type=int, default=None, help="linear coefficient a")
    p.add_argument("--sum-b", default=None,
                   help="comma-separated coefficients b1..bd for the maps")
    p.add_argument("--interval", type=_interval, default=None, metavar="LO:HI",
                   help="restrict the sum to this x-window (incomplete sum)")
    p.add_argument("--box", type=_interval, nargs="+", default=None, metavar="LO:HI",
                   help="x-window followed by one value-window per map")

    p = sub.add_parser("scan", help="orchestrated experiments")
    add_shared(p)
    p.add_argument("--kind", required=True,
                   choices=["convergence", "h-independence", "composite",
                            "equidistribution", "exponential"])
    p.add_argument("--t", type=_fraction, nargs="+", default=[Fraction("2.76")])
    p.add_argument("--h", type=int, nargs="+", default=[1])
    p.add_argument("--q", type=int, nargs="+", default=None,
                   help="moduli (primes where the kind requires them)")
    p.add_argument("--grid", type=_grid, default=DEFAULT_GRID, metavar="LO:HI:STEP")
    p.add_argument("--curves", action="store_true",
                   help="also export the raw empirical curves per cell")
    return top


def _out_dir(args: argparse.Namespace) -> Path:
    out = args.out or os.environ.get(_OUT_ENV) or "nfgaps-out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _flags_dict(args: argparse.Namespace) -> dict:
    flags = {}
    for key, value in sorted(vars(args).items()):
        if key in ("command",):
            continue
        if isinstance(value, Fraction):
            value = str(value)
        elif isinstance(value, list):
            value = [str(v) if isinstance(v, Fraction) else
                     (f"{v.lo}:{v.hi}" if isinstance(v, Interval) else v) for v in value]
        elif isinstance(value, LambdaGrid):
            value = f"{value.lo}:{value.hi}:{value.step}"
        elif isinstance(value, Interval):
            value = f"{value.lo}:{value.hi}"
        elif isinstance(value, Path):
            value = str(value)
        flags[key] = value
    return flags


def _cmd_curve(args: argparse.Namespace, out: Path) -> list[str]:
    artifacts = []
    if args.union:
        union_dir = out / f"union_q{args.q}"
        union_dir.mkdir(exist_ok=True)
        for h, ps in nf_union(args.q).items():
            path = union_dir / f"h{h:04d}.csv"
            write_points_csv(ps, path)
            artifacts.append(str(path.relative_to(out)))
        return artifacts
    if args.h is None:
        raise PreconditionError("--h is required unless --union is given")
    ps = build_nf_curve(args.q, args.h) if args.raw else build_curve(args.q, args.h)
    kind = "raw" if args.raw else "centered"
    base = f"curve_q{args.q}_h{args.h}_{kind}"
    write_points_csv(ps, out / f"{base}.csv")
    write_sidecar_json(ps, out / f"{base}.json")
    return [f"{base}.csv", f"{base}.json"]


def _cmd_gaps(args: argparse.Namespace, out: Path) -> list[str]:
    ps = build_curve(args.q, args.h)
    seq = angle_sequence(ps, args.t)
    gaps = normalized_gaps(seq)
    grid_values = args.grid.values()
    curve = empirical_G(gaps, grid_values)
    base = f"gaps_q{args.q}_h{args.h}"
    write_gap_grid_csv(grid_values, curve, out / f"{base}.csv")
    write_run_header_json(ps, seq, out / f"{base}.json")
    artifacts = [f"{base}.csv", f"{base}.json"]
    if args.per_point:
        rows = gap_per_point(ps, args.t)
        write_gap_per_point_csv(rows, out / f"{base}_points.csv")
        artifacts.append(f"{base}_points.csv")
    return artifacts


def _cmd_limit(args: argparse.Namespace, out: Path) -> list[str]:
    t = float(args.t)
    base = f"limit_t{t:g}"
    write_limit_csv(t, args.grid.values(), out / f"{base}.csv")
    artifacts = [f"{base}.csv"]
    if (args.tile_t is None) != (args.tile_lambda is None):
        raise PreconditionError("--tile-t and --tile-lambda must be given together")
    if args.tile_t is not None:
        write_tiles_csv(args.tile_t.values(), args.tile_lambda.values(),
                        out / "tiles.csv")
        artifacts.append("tiles.csv")
    return artifacts


def _cmd_omega(args: argparse.Namespace, out: Path) -> list[str]:
    rows = []
    for lam in args.lam:
        rows.append(omega_volume(args.t, lam, args.samples, args.seed,
                                 threads=args.threads))
        if args.quadrature:
            value = omega_volume_quadrature(float(args.t), lam)
            rows.append((float(args.t), lam, interference_order(args.t), value))
    write_volume_csv(rows, out / "omega.csv")
    return ["omega.csv"]


def _cmd_expsum(args: argparse.Namespace, out: Path) -> list[str]:
    tup = neighbor_flip_tuple(args.p, args.h, args.D)
    artifacts = []
    if args.sum_b is not None:
        b = [int(part) for part in args.sum_b.split(",")]
        a = args.sum_a or 0
        if args.interval is not None:
            value = incomplete_sum(tup, a, b, args.interval)
            bound = 8 * tup.d * math.sqrt(tup.p) * math.log(tup.p)
        else:
            value = complete_sum(tup, a, b)
            bound = 4 * tup.d * math.sqrt(tup.p)
        ratio = abs(value) / bound
        write_sums_csv([(tup.p, tup.d, a, b, value, ratio)], out / "sums.csv")
        artifacts.append("sums.csv")
    if args.box is not None:
        if len(args.box) != tup.d + 1:
            raise PreconditionError(
                f"--box needs 1 x-window plus {tup.d} value windows; got {len(args.box)}"
            )
        spec = BoxSpec(x_window=args.box[0], value_windows=tuple(args.box[1:]))
        write_boxes_csv([box_count(tup, spec)], out / "boxes.csv")
        artifacts.append("boxes.csv")
    if not artifacts:
        raise PreconditionError("expsum needs --sum-b and/or --box")
    return artifacts


def _cmd_scan(args: argparse.Namespace, out: Path) -> list[str]:
    kind = args.kind
    grid = args.grid
    config = _flags_dict(args)
    if kind == "convergence":
        if not args.q:
            raise PreconditionError("--q (prime moduli) is required for convergence scans")
        reports = convergence_scan(args.t[0], args.h[0], args.q, grid)
    elif kind == "h-independence":
        if not args.q:
            raise PreconditionError("--q (one prime) is required for h-independence scans")
        reports = h_independence(args.t[0], args.q[0], args.h, grid)
    elif kind == "composite":
        if not args.q:
            raise PreconditionError("--q (modulus range) is required for composite scans")
        reports = composite_contrast(args.q, args.t[0], args.h[0], grid)
    elif kind == "equidistribution":
        if not args.q:
            raise PreconditionError("--q (one prime) is required for equidistribution checks")
        ks = equidistribution_check(args.q[0], args.h[0], args.t[0])
        reports = []
        config["ks_statistic"] = ks
    else:
        if not args.q:
            raise PreconditionError("--q (one prime) is required for exponential scans")
        reports = exponential_limit_scan(args.q[0], args.h[0], args.t, grid)
    write_report_json(config, reports, out / "report.json")
    artifacts = ["report.json"]
    if args.curves and kind != "equidistribution":
        if kind == "h-independence":
            cells = [(args.q[0], h, args.t[0]) for h in args.h]
        elif kind == "exponential":
            cells = [(args.q[0], args.h[0], t) for t in args.t]
        else:
            cells = [(q, args.h[0], args.t[0]) for q in args.q]
        for q, h, t in cells:
            name = f"curve_q{q}_h{h}_t{float(t):g}.csv"
            write_curve_csv(grid, empirical_gap_curve(q, h, t, grid), out / name)
            artifacts.append(name)
    return artifacts


_HANDLERS = {
    "curve": _cmd_curve,
    "gaps": _cmd_gaps,
    "limit": _cmd_limit,
    "omega": _cmd_omega,
    "expsum": _cmd_expsum,
    "scan": _cmd_scan,
}


def run(argv: list[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        out = _out_dir(args)
        artifacts = _HANDLERS[args.command](args, out)
        write_manifest(out, args.command, _flags_dict(args), args.seed,
                       __version__, artifacts)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    for artifact in artifacts:
        print(Path(out) / artifact)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
