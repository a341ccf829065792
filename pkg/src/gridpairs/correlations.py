"""Empirical pair-difference measures of fractional powers of grid points.

The three measures (level-separated, full with adjacent-level terms, and the
root-pair form for alpha = 1/b) are all assembled from canonical level-0
value clouds: the level-k contribution equals the canonical cloud rotated by
exp(i*2*pi*alpha*k), an exact identity of the level powers.  Pair enumeration
is either brute force over all ordered pairs or pruned to lattice offsets p
with |p| below a certified radius; both paths evaluate values through the
same power tables, so they produce bit-identical clouds.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .grids import GridSpec, disk_points
from .powers import TAU, theta_array
from .scaling import LimitClass, ScalingRegime, phi_psi

MODES = ("level", "full", "roots")
ENUMERATIONS = ("pruned", "brute")

# pairs whose argument representatives agree to this tolerance count as
# sharing a ray through the origin
_DIAG_THETA_TOL = 1e-14

_BRUTE_BLOCK = 512
_PRUNE_CHUNK = 32


@dataclass(frozen=True)
class CorrelationConfig:
    """Parameters selecting one empirical pair-difference measure."""

    alpha: float
    grid: GridSpec
    N: int
    scaling: ScalingRegime
    support_radius: float = 1.5
    n_prime: int = 0
    n_second: int = 1
    mode: str = "level"
    roots_b: int | None = None
    enumeration: str = "pruned"
    safety: float = 2.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.n_prime < 0 or self.n_second < 1:
            raise ValueError("need n_prime >= 0 and n_second >= 1")
        if self.support_radius <= 0.0:
            raise ValueError("support_radius must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.enumeration not in ENUMERATIONS:
            raise ValueError(
                f"enumeration must be one of {ENUMERATIONS}, got {self.enumeration!r}"
            )
        if self.safety < 1.0:
            raise ValueError("pruning safety factor must be >= 1")
        if self.mode == "roots":
            b = self.roots_b
            if not isinstance(b, int) or b < 2:
                raise ValueError("roots mode requires an integer root order b >= 2")
            if self.alpha != 1.0 / b:
                raise ValueError("roots mode requires alpha = 1/b exactly")
            if self.n_prime != 0 or self.n_second != b:
                raise ValueError("roots mode requires (n_prime, n_second) = (0, b)")
            if self.scaling.gamma is None:
                raise ValueError("roots mode requires a power-law scaling factor")

    @property
    def levels(self) -> int:
        return self.n_prime + self.n_second

    def phi(self) -> float:
        return self.scaling.phi(self.alpha, self.N)

    def psi(self) -> float:
        return self.scaling.psi(self.alpha, self.N)

    def limit_class(self) -> LimitClass:
        return self.scaling.limit_class(self.alpha)


@dataclass(frozen=True)
class WeightedPointCloud:
    """Finite empirical measure: points in the support disk sharing one mass."""

    points: np.ndarray
    weight: float
    total_raw_pairs: int | None = None

    def __post_init__(self) -> None:
        if not self.weight > 0.0:
            raise ValueError("point mass must be positive")

    @property
    def count(self) -> int:
        return int(self.points.size)

    @property
    def total_mass(self) -> float:
        return self.weight * self.points.size


@dataclass(frozen=True)
class RadialHistogram:
    """Binned radial profile: mass per annulus and per-area density."""

    edges: np.ndarray
    mass: np.ndarray
    density: np.ndarray

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)


@dataclass(frozen=True)
class PlanarHistogram:
    """Mass and density on an R x R cell grid over [-A, A]^2."""

    half_width: float
    resolution: int
    mass: np.ndarray
    density: np.ndarray

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        step = 2.0 * self.half_width / self.resolution
        c = -self.half_width + step * (np.arange(self.resolution) + 0.5)
        return c, c


class _PointTable:
    """Grid points in the closed disk of radius N with integer coordinates,
    cached argument/power tables, and an index lookup for coordinate shifts."""

    def __init__(self, grid: GridSpec, N: int):
        dp = disk_points(grid, float(N))
        self.coords = dp.coords
        self.points = dp.points
        self.re = dp.points.real
        self.im = dp.points.imag
        self.mod = np.abs(dp.points)
        self.theta = theta_array(self.re, self.im)
        self.is_lattice = grid.offset == 0
        self._powers: dict[tuple[float, int], np.ndarray] = {}
        self._index: np.ndarray | None = None
        self._amin = self._bmin = 0

    @property
    def count(self) -> int:
        return int(self.points.size)

    def power(self, beta: float, level: int) -> np.ndarray:
        key = (beta, level)
        tab = self._powers.get(key)
        if tab is None:
            w = beta * (self.theta + TAU * level)
            r = self.mod**beta
            tab = r * np.cos(w) + 1j * (r * np.sin(w))
            self._powers[key] = tab
        return tab

    def _ensure_index(self) -> None:
        if self._index is not None:
            return
        a = self.coords[:, 0]
        b = self.coords[:, 1]
        self._amin = int(a.min())
        self._bmin = int(b.min())
        shape = (int(a.max()) - self._amin + 1, int(b.max()) - self._bmin + 1)
        index = np.full(shape, -1, dtype=np.int64)
        index[a - self._amin, b - self._bmin] = np.arange(a.size, dtype=np.int64)
        self._index = index

    def shifted_indices(self, pa: int, pb: int) -> tuple[np.ndarray, np.ndarray]:
        """Rows (i, j) with points[j] = points[i] + (pa, pb) in coordinates;
        both endpoints lie in the disk by construction."""
        self._ensure_index()
        na = self.coords[:, 0] + pa
        nb = self.coords[:, 1] + pb
        ok = (
            (na >= self._amin)
            & (na <= self._amin + self._index.shape[0] - 1)
            & (nb >= self._bmin)
            & (nb <= self._bmin + self._index.shape[1] - 1)
        )
        j = self._index[na[ok] - self._amin, nb[ok] - self._bmin]
        good = j >= 0
        i = np.nonzero(ok)[0][good]
        return i, j[good]


def _pair_relation(table: _PointTable, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    """+1 where theta(n) > theta(m), -1 where <, 0 where (m, n) share a ray
    through the origin (exact integer test on lattices, tolerance otherwise)."""
    diff = table.theta[j] - table.theta[i]
    diag = np.abs(diff) <= _DIAG_THETA_TOL
    if table.is_lattice and i.size:
        cross = (
            table.coords[i, 0] * table.coords[j, 1]
            - table.coords[i, 1] * table.coords[j, 0]
        )
        dot = table.re[i] * table.re[j] + table.im[i] * table.im[j]
        diag |= (cross == 0) & (dot > 0.0)
    return np.where(diag, 0, np.where(diff > 0.0, 1, -1)).astype(np.int8)


def _lipschitz_constant(alpha: float) -> float:
    """Bound on the derivative of the inverse power map near 1, used to turn
    the support restriction into a search radius for p = n - m."""
    return 2.0 ** (1.0 / alpha - 1.0) / alpha


def _prune_radius_for(config: CorrelationConfig, A: float) -> float:
    phi = config.phi()
    return (
        config.safety
        * _lipschitz_constant(config.alpha)
        * A
        * config.N ** (1.0 - config.alpha)
        / phi
    )


def prune_radius(config: CorrelationConfig) -> float:
    """Certified search radius for p = n - m: ordered pairs whose scaled
    difference lands in the support disk satisfy |p| <= this radius."""
    return _prune_radius_for(config, config.support_radius)


# a canonical cloud is (n_level, m_level, filt): values are
# phi * (n^[alpha, n_level] - m^[alpha, m_level]) over ordered pairs,
# optionally restricted by the sign of theta(n) - theta(m)
_CloudSpec = tuple[int, int, str | None]


def _run_tasks(tasks, worker, threads: int) -> list:
    if threads <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, tasks))


def _collect_canonical(
    config: CorrelationConfig,
    specs: list[_CloudSpec],
    A: float,
    threads: int = 1,
    table: _PointTable | None = None,
) -> tuple[list[np.ndarray], list[int] | None]:
    """Canonical value clouds for each spec, plus (brute mode only) the
    number of enumerated ordered pairs per spec before support restriction.

    Results do not depend on the enumeration mode: pruned enumeration visits
    a superset of the contributing pairs, certified by the search radius.
    """
    phi = config.phi()
    a2 = A * A
    pruned = config.enumeration == "pruned"

    if pruned:
        radius = _prune_radius_for(config, A)
        lat = disk_points(config.grid.lattice, radius)
        if lat.coords.shape[0] == 0:
            return [np.empty(0, dtype=np.complex128) for _ in specs], None
        offsets = lat.coords
        tasks = [
            offsets[s : s + _PRUNE_CHUNK] for s in range(0, offsets.shape[0], _PRUNE_CHUNK)
        ]
    if table is None:
        table = _PointTable(config.grid, config.N)
    if table.count == 0:
        empties = [np.empty(0, dtype=np.complex128) for _ in specs]
        return empties, (None if pruned else [0] * len(specs))
    tables = {
        lvl: table.power(config.alpha, lvl)
        for lvl in {s[0] for s in specs} | {s[1] for s in specs}
    }
    need_rel = any(s[2] is not None for s in specs)

    def accumulate(i: np.ndarray, j: np.ndarray, out: list[list[np.ndarray]], raw: list[int]):
        rel = _pair_relation(table, i, j) if need_rel else None
        for idx, (n_lvl, m_lvl, filt) in enumerate(specs):
            if filt is None:
                ii, jj = i, j
            else:
                want = {"gt": 1, "lt": -1, "eq": 0}[filt]
                sel = rel == want
                ii, jj = i[sel], j[sel]
            raw[idx] += int(ii.size)
            v = phi * (tables[n_lvl][jj] - tables[m_lvl][ii])
            keep = (v.real * v.real + v.imag * v.imag) <= a2
            out[idx].append(v[keep])

    if pruned:

        def worker(chunk):
            out: list[list[np.ndarray]] = [[] for _ in specs]
            raw = [0] * len(specs)
            for pa, pb in chunk:
                i, j = table.shifted_indices(int(pa), int(pb))
                if i.size:
                    accumulate(i, j, out, raw)
            return out, raw

    else:
        K = table.count
        cols = np.arange(K, dtype=np.int64)
        tasks = list(range(0, K, _BRUTE_BLOCK))

        def worker(start):
            out: list[list[np.ndarray]] = [[] for _ in specs]
            raw = [0] * len(specs)
            rows = np.arange(start, min(start + _BRUTE_BLOCK, K), dtype=np.int64)
            i = np.repeat(rows, K)
            j = np.tile(cols, rows.size)
            keep = i != j
            accumulate(i[keep], j[keep], out, raw)
            return out, raw

    results = _run_tasks(tasks, worker, threads)
    values = [
        np.concatenate([arr for out, _ in results for arr in out[idx]] or
                       [np.empty(0, dtype=np.complex128)])
        for idx in range(len(specs))
    ]
    raw_totals = [sum(raw[idx] for _, raw in results) for idx in range(len(specs))]
    return values, (raw_totals if not pruned else None)


def _rotation(alpha: float, k: int) -> complex:
    return cmath.exp(1j * TAU * alpha * k)


def _rotated_concat(alpha: float, values: np.ndarray, ks: range) -> list[np.ndarray]:
    return [_rotation(alpha, k) * values for k in ks]


def build_level_measure(config: CorrelationConfig, threads: int = 1) -> WeightedPointCloud:
    """Level-separated measure: scaled differences of same-level powers over
    all ordered pairs in the disk, summed over levels -n_prime .. n_second-1."""
    if config.mode != "level":
        raise ValueError("config.mode must be 'level'")
    (values,), raw = _collect_canonical(config, [(0, 0, None)], config.support_radius, threads)
    ks = range(-config.n_prime, config.n_second)
    pts = np.concatenate(_rotated_concat(config.alpha, values, ks) or
                         [np.empty(0, dtype=np.complex128)])
    weight = 1.0 / (config.levels * config.psi())
    total = raw[0] * config.levels if raw is not None else None
    return WeightedPointCloud(pts, weight, total)


def build_full_measure(config: CorrelationConfig, threads: int = 1) -> WeightedPointCloud:
    """Level-separated measure plus the adjacent-level terms that pair the
    two sides of the branch cut (higher level on n when theta(n) < theta(m),
    higher level on m when theta(n) > theta(m))."""
    if config.mode != "full":
        raise ValueError("config.mode must be 'full'")
    specs: list[_CloudSpec] = [(0, 0, None), (1, 0, "lt"), (0, 1, "gt")]
    (level_vals, cross_lt, cross_gt), raw = _collect_canonical(
        config, specs, config.support_radius, threads
    )
    parts = _rotated_concat(
        config.alpha, level_vals, range(-config.n_prime, config.n_second)
    )
    cross = np.concatenate([cross_lt, cross_gt])
    parts += _rotated_concat(
        config.alpha, cross, range(-config.n_prime, config.n_second - 1)
    )
    pts = np.concatenate(parts or [np.empty(0, dtype=np.complex128)])
    weight = 1.0 / (config.levels * config.psi())
    total = None
    if raw is not None:
        total = raw[0] * config.levels + (raw[1] + raw[2]) * (config.levels - 1)
    return WeightedPointCloud(pts, weight, total)


def build_roots_measure(config: CorrelationConfig, threads: int = 1) -> WeightedPointCloud:
    """Root-pair measure for alpha = 1/b: scaled differences v - u over all
    b-th roots u^b = m, v^b = n of ordered pairs of grid points."""
    if config.mode != "roots":
        raise ValueError("config.mode must be 'roots'")
    b = config.roots_b
    specs: list[_CloudSpec] = [(d, 0, None) for d in range(b)]
    values, raw = _collect_canonical(config, specs, config.support_radius, threads)
    parts = []
    for d in range(b):
        parts += _rotated_concat(config.alpha, values[d], range(b))
    pts = np.concatenate(parts or [np.empty(0, dtype=np.complex128)])
    gamma = config.scaling.gamma
    weight = config.alpha / config.N ** (2.0 * (2.0 - config.alpha - gamma))
    if not math.isclose(weight, 1.0 / (b * config.psi()), rel_tol=1e-9):
        raise AssertionError("root-pair weight disagrees with 1/(b*psi(N))")
    total = sum(raw) * b if raw is not None else None
    return WeightedPointCloud(pts, weight, total)


def build_measure(config: CorrelationConfig, threads: int = 1) -> WeightedPointCloud:
    """Dispatch on config.mode."""
    builder = {
        "level": build_level_measure,
        "full": build_full_measure,
        "roots": build_roots_measure,
    }[config.mode]
    return builder(config, threads=threads)


def decompose_pm(
    config: CorrelationConfig, threads: int = 1
) -> tuple[WeightedPointCloud, WeightedPointCloud, WeightedPointCloud]:
    """Split the level-separated measure by the sign of theta(n) - theta(m):
    (plus, minus, diagonal).  The minus cloud is the pointwise negation of
    the plus cloud (swap the ordered pair), exactly in floating point."""
    if config.mode != "level":
        raise ValueError("decomposition applies to the level-separated measure")
    specs: list[_CloudSpec] = [(0, 0, "gt"), (0, 0, "lt"), (0, 0, "eq")]
    values, _ = _collect_canonical(config, specs, config.support_radius, threads)
    ks = range(-config.n_prime, config.n_second)
    weight = 1.0 / (config.levels * config.psi())
    clouds = []
    for v in values:
        pts = np.concatenate(_rotated_concat(config.alpha, v, ks) or
                             [np.empty(0, dtype=np.complex128)])
        clouds.append(WeightedPointCloud(pts, weight))
    return clouds[0], clouds[1], clouds[2]


def cross_level_count(config: CorrelationConfig, A: float, k: int) -> int:
    """Number of ordered pairs (n, m) in the disk with theta(n) < theta(m)
    whose adjacent-level difference n^[alpha,k+1] - m^[alpha,k] lands within
    A/phi(N); independent of k since level shifts are rotations."""
    if A <= 0.0:
        raise ValueError("A must be positive")
    cfg = config
    if config.mode != "level":
        cfg = CorrelationConfig(
            alpha=config.alpha,
            grid=config.grid,
            N=config.N,
            scaling=config.scaling,
            support_radius=config.support_radius,
            n_prime=config.n_prime,
            n_second=config.n_second,
            mode="level",
            enumeration=config.enumeration,
            safety=config.safety,
        )
    (values,), _ = _collect_canonical(cfg, [(k + 1, k, "lt")], A)
    return int(values.size)


def radial_histogram(cloud: WeightedPointCloud, edges) -> RadialHistogram:
    """Bin |z| into half-open bins (r_i, r_{i+1}], innermost closed at r_0."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0.0):
        raise ValueError("edges must be strictly increasing with >= 2 entries")
    if edges[0] < 0.0:
        raise ValueError("radial edges must be >= 0")
    r = np.abs(cloud.points)
    idx = np.searchsorted(edges, r, side="left") - 1
    idx[r == edges[0]] = 0
    nbins = edges.size - 1
    good = (idx >= 0) & (idx < nbins)
    counts = np.bincount(idx[good], minlength=nbins)
    mass = cloud.weight * counts
    areas = math.pi * (edges[1:] ** 2 - edges[:-1] ** 2)
    return RadialHistogram(edges, mass, mass / areas)


def planar_histogram(cloud: WeightedPointCloud, A: float, R: int) -> PlanarHistogram:
    """Bin points into an R x R grid of square cells covering [-A, A]^2."""
    if A <= 0.0 or R < 1:
        raise ValueError("need A > 0 and resolution >= 1")
    step = 2.0 * A / R
    ix = np.floor((cloud.points.real + A) / step).astype(np.int64)
    iy = np.floor((cloud.points.imag + A) / step).astype(np.int64)
    ix[cloud.points.real == A] = R - 1
    iy[cloud.points.imag == A] = R - 1
    good = (ix >= 0) & (ix < R) & (iy >= 0) & (iy < R)
    flat = np.bincount(ix[good] * R + iy[good], minlength=R * R)
    mass = cloud.weight * flat.reshape(R, R).astype(float)
    return PlanarHistogram(A, R, mass, mass / (step * step))


def bump(A: float):
    """C^1 radial test function (1 - (|z|/A)^2)^2 supported on |z| <= A."""
    if A <= 0.0:
        raise ValueError("support radius must be positive")

    def f(z):
        t = np.abs(z) / A
        return np.where(t <= 1.0, (1.0 - t * t) ** 2, 0.0)

    return f


def evaluate(cloud: WeightedPointCloud, f) -> float:
    """Pair the measure with a test function: weight * sum f(z)."""
    if cloud.count == 0:
        return 0.0
    try:
        vals = np.asarray(f(cloud.points), dtype=float)
        if vals.shape != cloud.points.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(f(z)) for z in cloud.points])
    return float(cloud.weight * vals.sum())


__all__ = [
    "CorrelationConfig",
    "WeightedPointCloud",
    "RadialHistogram",
    "PlanarHistogram",
    "build_level_measure",
    "build_full_measure",
    "build_roots_measure",
    "build_measure",
    "decompose_pm",
    "cross_level_count",
    "prune_radius",
    "radial_histogram",
    "planar_histogram",
    "bump",
    "evaluate",
    "phi_psi",
    "ScalingRegime",
    "LimitClass",
]
