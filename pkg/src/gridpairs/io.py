"""Export and re-import of clouds, histograms, density curves and reports.

CSV: comma-separated, one header row, LF line endings, 17-significant-digit
decimals (exact float round-trip).  JSON: one object with "manifest" and
"rows" keys.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .correlations import PlanarHistogram, RadialHistogram, WeightedPointCloud


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_table(path, header: list[str], rows, fmt_tag: str, manifest: dict | None = None) -> None:
    path = Path(path)
    if fmt_tag == "csv":
        lines = [",".join(header)]
        lines += [",".join(fmt(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n", newline="\n")
    elif fmt_tag == "json":
        obj = {
            "manifest": manifest or {},
            "rows": [dict(zip(header, (float(v) for v in row))) for row in rows],
        }
        path.write_text(json.dumps(obj, indent=1) + "\n", newline="\n")
    else:
        raise ValueError(f"unknown format {fmt_tag!r} (use csv or json)")


def read_table(path) -> tuple[dict | None, list[str], list[list[float]]]:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        obj = json.loads(text)
        rows = obj["rows"]
        header = list(rows[0].keys()) if rows else []
        return obj.get("manifest"), header, [[float(r[h]) for h in header] for r in rows]
    lines = [ln for ln in text.split("\n") if ln]
    header = lines[0].split(",")
    return None, header, [[float(v) for v in ln.split(",")] for ln in lines[1:]]


CLOUD_HEADER = ["re", "im", "weight"]
RADIAL_HEADER = ["r_lo", "r_hi", "mass", "density"]
PLANAR_HEADER = ["cell_x", "cell_y", "mass", "density"]
DENSITY_HEADER = ["r", "rho", "radial_density"]
COMPARE_HEADER = ["N", "l1_discrepancy", "sup_discrepancy", "point_count", "wall_time"]


def cloud_rows(cloud: WeightedPointCloud):
    return [(z.real, z.imag, cloud.weight) for z in cloud.points]


def read_cloud(path) -> WeightedPointCloud:
    _, header, rows = read_table(path)
    if header != CLOUD_HEADER:
        raise ValueError(f"not a cloud file: header {header}")
    pts = np.array([complex(r[0], r[1]) for r in rows], dtype=np.complex128)
    weight = rows[0][2] if rows else 1.0
    return WeightedPointCloud(pts, weight)


def radial_rows(hist: RadialHistogram):
    return [
        (hist.edges[i], hist.edges[i + 1], hist.mass[i], hist.density[i])
        for i in range(hist.mass.size)
    ]


def read_radial(path) -> RadialHistogram:
    _, header, rows = read_table(path)
    if header != RADIAL_HEADER:
        raise ValueError(f"not a radial histogram file: header {header}")
    edges = np.array([r[0] for r in rows] + [rows[-1][1]])
    mass = np.array([r[2] for r in rows])
    density = np.array([r[3] for r in rows])
    return RadialHistogram(edges, mass, density)


def planar_rows(hist: PlanarHistogram):
    cx, cy = hist.cell_centers()
    rows = []
    for i in range(hist.resolution):
        for j in range(hist.resolution):
            rows.append((cx[i], cy[j], hist.mass[i, j], hist.density[i, j]))
    return rows


def read_planar(path, resolution: int | None = None) -> PlanarHistogram:
    _, header, rows = read_table(path)
    if header != PLANAR_HEADER:
        raise ValueError(f"not a planar histogram file: header {header}")
    n = resolution or int(round(len(rows) ** 0.5))
    if n * n != len(rows):
        raise ValueError("planar file is not a square cell grid")
    mass = np.array([r[2] for r in rows]).reshape(n, n)
    density = np.array([r[3] for r in rows]).reshape(n, n)
    xs = sorted({r[0] for r in rows})
    half_width = xs[-1] + (xs[1] - xs[0]) / 2.0 if len(xs) > 1 else abs(xs[0]) * 2
    return PlanarHistogram(half_width, n, mass, density)


def write_manifest(path, manifest: dict) -> None:
    Path(path).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", newline="\n")


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())
