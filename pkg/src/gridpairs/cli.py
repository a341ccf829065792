"""Command-line driver: build measures, export histograms and density
curves, run convergence comparisons, and run the verification suite.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io as gio
from .correlations import (
    CorrelationConfig,
    build_measure,
    planar_histogram,
    radial_histogram,
)
from .density import DensityModel, annulus_mass, repulsion_radius, rho, rho_radial
from .grids import GridSpec, LatticeBasis
from .scaling import ScalingRegime
from .verify import run_suite


class CliError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route through the
    # validation exit code instead
    def error(self, message):
        raise CliError(message)


def _parse_real(text: str) -> float:
    """Real number, accepting exact fractions like 23/42."""
    try:
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"cannot parse number {text!r}") from exc


def _parse_reals(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise CliError(f"{what} needs {n} comma-separated reals, got {text!r}")
    return [_parse_real(p) for p in parts]


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--basis", default="1,0,0,1", help="re1,im1,re2,im2 of the lattice basis")
    p.add_argument("--offset", default="0,0", help="re,im of the grid offset")


def _add_scaling_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--gamma", type=_parse_real, help="power-law scaling N^gamma")
    g.add_argument(
        "--lambda", dest="lam", type=_parse_real, help="proportional scaling lam*N^(1-alpha)"
    )


def _add_measure_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=_parse_real, required=True)
    _add_grid_flags(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--Np", type=int, default=0, help="levels below 0 (N')")
    p.add_argument("--Ns", type=int, default=1, help="levels at or above 0 (N'')")
    _add_scaling_flags(p)
    p.add_argument("--A", type=_parse_real, default=1.5, help="support disk radius")
    p.add_argument("--mode", choices=("level", "full", "roots"), default="level")
    p.add_argument("--b", type=int, default=None, help="root order (roots mode)")
    p.add_argument("--enum", choices=("pruned", "brute"), default="pruned")
    p.add_argument("--safety", type=_parse_real, default=2.0)


def _add_output_flags(p: argparse.ArgumentParser, bins_default: int = 60) -> None:
    p.add_argument("--bins", type=int, default=bins_default, help="radial bins over [0, A]")
    p.add_argument("--res", type=int, default=60, help="planar cells per axis")
    p.add_argument("--out", required=True, help="output path prefix")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def _grid_from(args) -> GridSpec:
    b = _parse_reals(args.basis, 4, "--basis")
    o = _parse_reals(args.offset, 2, "--offset")
    return GridSpec(LatticeBasis(complex(b[0], b[1]), complex(b[2], b[3])), complex(o[0], o[1]))


def _scaling_from(args) -> ScalingRegime:
    if args.gamma is not None:
        return ScalingRegime.power_law(args.gamma)
    return ScalingRegime.proportional(args.lam)


def _config_from(args, N: int | None = None) -> CorrelationConfig:
    return CorrelationConfig(
        alpha=args.alpha,
        grid=_grid_from(args),
        N=N if N is not None else args.N,
        scaling=_scaling_from(args),
        support_radius=args.A,
        n_prime=args.Np,
        n_second=args.Ns,
        mode=args.mode,
        roots_b=args.b,
        enumeration=args.enum,
        safety=args.safety,
    )


def _manifest_from(args, command: str, extra: dict | None = None) -> dict:
    keep = (
        "alpha",
        "basis",
        "offset",
        "N",
        "Np",
        "Ns",
        "gamma",
        "lam",
        "A",
        "mode",
        "b",
        "enum",
        "safety",
        "bins",
        "res",
        "format",
        "threads",
        "deterministic",
        "seed",
    )
    manifest = {"command": command}
    for key in keep:
        if hasattr(args, key):
            manifest[key] = getattr(args, key)
    if extra:
        manifest["derived"] = extra
    return manifest


def _apply_manifest(args) -> None:
    data = gio.read_manifest(args.manifest)
    for key, value in data.items():
        if key in ("command", "derived"):
            continue
        if hasattr(args, key) and value is not None:
            setattr(args, key, value)


def _derived(config: CorrelationConfig) -> dict:
    lc = config.limit_class()
    return {
        "phi": config.phi(),
        "psi": config.psi(),
        "limit_class": lc.kind,
        "limit_value": lc.value,
    }


def _model_for(config: CorrelationConfig) -> DensityModel:
    return DensityModel.build(
        config.alpha,
        config.grid.basis,
        config.limit_class(),
        support_radius=config.support_radius,
    )


def cmd_simulate(args) -> int:
    config = _config_from(args)
    cloud = build_measure(config, threads=args.threads)
    edges = np.linspace(0.0, config.support_radius, args.bins + 1)
    radial = radial_histogram(cloud, edges)
    planar = planar_histogram(cloud, config.support_radius, args.res)
    manifest = _manifest_from(args, "simulate", _derived(config))
    out, fmt = args.out, args.format
    gio.write_table(f"{out}_cloud.{fmt}", gio.CLOUD_HEADER, gio.cloud_rows(cloud), fmt, manifest)
    gio.write_table(
        f"{out}_radial.{fmt}", gio.RADIAL_HEADER, gio.radial_rows(radial), fmt, manifest
    )
    gio.write_table(
        f"{out}_planar.{fmt}", gio.PLANAR_HEADER, gio.planar_rows(planar), fmt, manifest
    )
    gio.write_manifest(f"{out}_manifest.json", manifest)
    print(f"wrote {out}_cloud/{out}_radial/{out}_planar ({cloud.count} points)")
    return 0


def cmd_density(args) -> int:
    config = _config_from(args)
    model = _model_for(config)
    A = config.support_radius
    edges = np.linspace(0.0, A, args.bins + 1)
    rows = []
    for r in 0.5 * (edges[:-1] + edges[1:]):
        rows.append((r, rho(model, r), rho_radial(model, r)))
    for d in model.discontinuity_radii(A):
        rows.append((d, rho(model, d, side="left"), rho_radial(model, d, side="left")))
        rows.append((d, rho(model, d, side="right"), rho_radial(model, d, side="right")))
    rows.sort(key=lambda row: (row[0], row[1]))
    manifest = _manifest_from(args, "density", _derived(config))
    path = f"{args.out}_density.{args.format}"
    gio.write_table(path, gio.DENSITY_HEADER, rows, args.format, manifest)
    gio.write_manifest(f"{args.out}_manifest.json", manifest)
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def compare_window(model: DensityModel, A: float, nbins: int) -> tuple[float, float]:
    """Default discrepancy window: clear of the origin-side structure and of
    the support boundary by two bins."""
    width = A / nbins
    if model.regime.kind == "finite":
        return repulsion_radius(model) + 2.0 * width, A - 2.0 * width
    return 0.3, A - 2.0 * width


def window_bins(
    model: DensityModel, edges: np.ndarray, r_lo: float, r_hi: float
) -> np.ndarray:
    """Indices of bins inside [r_lo, r_hi] and at least one bin width away
    from every discontinuity radius."""
    width = float(edges[1] - edges[0])
    lo, hi = edges[:-1], edges[1:]
    keep = (lo >= r_lo - 1e-12) & (hi <= r_hi + 1e-12)
    for d in model.discontinuity_radii(float(edges[-1])):
        keep &= (hi <= d - width) | (lo >= d + width)
    return np.nonzero(keep)[0]


def discrepancies(
    model: DensityModel, hist, bins: np.ndarray
) -> tuple[float, float]:
    """Windowed L1 and sup distance between the empirical radial density
    (bin mass / bin width) and the limit profile integrated per bin."""
    l1 = 0.0
    sup = 0.0
    for i in bins:
        a, b = float(hist.edges[i]), float(hist.edges[i + 1])
        theory = annulus_mass(model, a, b)
        gap = abs(float(hist.mass[i]) - theory)
        l1 += gap
        sup = max(sup, gap / (b - a))
    return l1, sup


def cmd_compare(args) -> int:
    n_values = [int(v) for v in args.N_list.split(",")]
    if not n_values:
        raise CliError("--N-list must name at least one N")
    base = _config_from(args, N=n_values[0])
    model = _model_for(base)
    edges = np.linspace(0.0, base.support_radius, args.bins + 1)
    r_lo, r_hi = compare_window(model, base.support_radius, args.bins)
    bins = window_bins(model, edges, r_lo, r_hi)
    rows = []
    for n in n_values:
        config = _config_from(args, N=n)
        t0 = time.perf_counter()
        cloud = build_measure(config, threads=args.threads)
        wall = time.perf_counter() - t0
        hist = radial_histogram(cloud, edges)
        l1, sup = discrepancies(model, hist, bins)
        rows.append((n, l1, sup, cloud.count, wall))
    slope = float("nan")
    if len(rows) >= 2 and all(r[1] > 0 for r in rows):
        slope = float(
            np.polyfit(np.log([r[0] for r in rows]), np.log([r[1] for r in rows]), 1)[0]
        )
    manifest = _manifest_from(args, "compare", _derived(base))
    manifest["window"] = [r_lo, r_hi]
    manifest["l1_slope_vs_N"] = slope
    path = f"{args.out}_compare.{args.format}"
    gio.write_table(path, gio.COMPARE_HEADER, rows, args.format, manifest)
    gio.write_manifest(f"{args.out}_manifest.json", manifest)
    for n, l1, sup, count, wall in rows:
        print(f"N={n}: L1={l1:.6g} sup={sup:.6g} points={count} wall={wall:.2f}s")
    print(f"fitted log-log slope: {slope:.3f}")
    return 0


def cmd_verify(args) -> int:
    grid = _grid_from(args)
    results = run_suite(
        grid,
        seed=args.seed,
        corrupt_branch_cut=args.corrupt_branch_cut,
        light=args.light,
    )
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    if args.out:
        report = {
            "seed": args.seed,
            "corrupt_branch_cut": args.corrupt_branch_cut,
            "results": [
                {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
            ],
        }
        Path(f"{args.out}_verify.json").write_text(json.dumps(report, indent=1) + "\n")
    return 0 if all(r.passed for r in results) else 3


def build_parser() -> _Parser:
    parser = _Parser(prog="gridpairs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="build a measure and export cloud/histograms")
    _add_measure_flags(p_sim)
    _add_output_flags(p_sim)
    p_sim.add_argument("--manifest", default=None, help="re-run from a manifest file")
    p_sim.set_defaults(func=cmd_simulate)

    p_den = sub.add_parser("density", help="export the limit density curve")
    _add_measure_flags(p_den)
    _add_output_flags(p_den)
    p_den.set_defaults(func=cmd_density)

    p_cmp = sub.add_parser("compare", help="empirical vs limit density over several N")
    _add_measure_flags(p_cmp)
    _add_output_flags(p_cmp)
    p_cmp.add_argument("--N-list", dest="N_list", required=True, help="comma-separated N values")
    p_cmp.set_defaults(func=cmd_compare)

    p_ver = sub.add_parser("verify", help="run the property suite")
    _add_grid_flags(p_ver)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", default=None)
    p_ver.add_argument("--light", action="store_true", help="smaller Monte-Carlo samples")
    p_ver.add_argument(
        "--corrupt-branch-cut",
        action="store_true",
        help="negative control: principal branch cut (cut-sensitive checks must fail)",
    )
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "manifest", None):
            _apply_manifest(args)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
