"""Complex Z-grids (translates of rank-2 lattices in C): basis reduction,
disk enumeration, power sums over disks, and near-line point counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

TAU = 2.0 * math.pi

_MAX_REDUCTION_STEPS = 64


def _check_finite(value: complex, name: str) -> None:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must have finite components, got {value!r}")


@dataclass(frozen=True)
class LatticeBasis:
    """Pair of complex vectors spanning C over R.

    The signed area Im(conj(b1)*b2) must be nonzero, otherwise the two
    vectors are collinear and generate no lattice.
    """

    b1: complex
    b2: complex

    def __post_init__(self) -> None:
        _check_finite(self.b1, "b1")
        _check_finite(self.b2, "b2")
        if self.det == 0.0:
            raise ValueError("degenerate basis: vectors are collinear over R")

    @property
    def det(self) -> float:
        """Signed area of the fundamental parallelogram, Im(conj(b1)*b2)."""
        return self.b1.real * self.b2.imag - self.b1.imag * self.b2.real


@dataclass(frozen=True)
class GridSpec:
    """The point set offset + Z*b1 + Z*b2."""

    basis: LatticeBasis
    offset: complex = 0j

    def __post_init__(self) -> None:
        _check_finite(self.offset, "offset")

    @property
    def lattice(self) -> "GridSpec":
        """The underlying lattice (same basis, zero offset)."""
        return GridSpec(self.basis, 0j)


@dataclass(frozen=True)
class GridStats:
    """Derived geometric quantities of a grid and its underlying lattice."""

    covolume: float
    systole_lattice: float
    systole_grid: float
    diameter: float


SQUARE = GridSpec(LatticeBasis(1 + 0j, 1j))
HEXAGONAL = GridSpec(LatticeBasis(1 + 0j, complex(0.5, math.sqrt(3.0) / 2.0)))


def reduce_basis(basis: LatticeBasis) -> LatticeBasis:
    """Lagrange-Gauss reduction of a rank-2 basis.

    The output generates the same lattice and satisfies |b1| <= |b2| and
    |Re(b2*conj(b1))| <= |b1|^2 / 2, so |b1| is the shortest nonzero
    lattice vector.
    """
    b1, b2 = basis.b1, basis.b2
    for _ in range(_MAX_REDUCTION_STEPS):
        n1 = b1.real * b1.real + b1.imag * b1.imag
        n2 = b2.real * b2.real + b2.imag * b2.imag
        if n1 > n2:
            b1, b2 = b2, b1
            n1 = n2
        mu = round((b2.real * b1.real + b2.imag * b1.imag) / n1)
        if mu == 0:
            return LatticeBasis(b1, b2)
        b2 = b2 - mu * b1
    raise RuntimeError("basis reduction did not terminate")


def _solve_coords(basis: LatticeBasis, w: complex) -> tuple[float, float]:
    """Real coordinates (a, b) with w = a*b1 + b*b2."""
    d = basis.det
    a = (basis.b2.imag * w.real - basis.b2.real * w.imag) / d
    b = (-basis.b1.imag * w.real + basis.b1.real * w.imag) / d
    return a, b


@dataclass(frozen=True)
class DiskPoints:
    """Grid points with 0 < |m| <= x, with integer coordinates in the
    reduced basis (lexicographic coordinate order)."""

    coords: np.ndarray  # (K, 2) int64, coordinates w.r.t. `basis`
    points: np.ndarray  # (K,) complex128
    basis: LatticeBasis  # reduced basis the coordinates refer to
    offset: complex


def disk_points(grid: GridSpec, x: float) -> DiskPoints:
    """Enumerate {m in grid : 0 < |m| <= x} with integer coordinates.

    The bounding box of candidate coordinates comes from the inverse basis
    matrix; membership is the plain comparison |m|^2 <= x^2, which is an
    exact integer comparison whenever basis, offset and x have exactly
    representable coordinates (products of integers below 2^53 round to
    themselves).
    """
    if not (math.isfinite(x) and x >= 0.0):
        raise ValueError(f"disk radius must be finite and >= 0, got {x}")
    red = reduce_basis(grid.basis)
    off = grid.offset
    empty = DiskPoints(
        np.empty((0, 2), dtype=np.int64),
        np.empty(0, dtype=np.complex128),
        red,
        off,
    )
    if x == 0.0:
        return empty
    a0, b0 = _solve_coords(red, -off)
    d = abs(red.det)
    ra = x * abs(red.b2) / d + 1e-9
    rb = x * abs(red.b1) / d + 1e-9
    alo, ahi = math.ceil(a0 - ra), math.floor(a0 + ra)
    blo, bhi = math.ceil(b0 - rb), math.floor(b0 + rb)
    if alo > ahi or blo > bhi:
        return empty
    aa, bb = np.meshgrid(
        np.arange(alo, ahi + 1, dtype=np.int64),
        np.arange(blo, bhi + 1, dtype=np.int64),
        indexing="ij",
    )
    aa = aa.ravel()
    bb = bb.ravel()
    re = off.real + aa * red.b1.real + bb * red.b2.real
    im = off.imag + aa * red.b1.imag + bb * red.b2.imag
    m2 = re * re + im * im
    keep = (m2 > 0.0) & (m2 <= x * x)
    coords = np.stack([aa[keep], bb[keep]], axis=1)
    return DiskPoints(coords, re[keep] + 1j * im[keep], red, off)


def enumerate_disk(grid: GridSpec, x: float) -> np.ndarray:
    """Grid points m with 0 < |m| <= x, deterministically ordered."""
    return disk_points(grid, x).points


def grid_stats(grid: GridSpec) -> GridStats:
    """Covolume, lattice systole, grid systole and a diameter bound.

    The diameter is the longer diagonal of the reduced-basis parallelogram,
    an upper bound for the minimal fundamental-domain diameter; every bound
    it enters stays valid.
    """
    red = reduce_basis(grid.basis)
    covolume = abs(red.det)
    systole_lattice = abs(red.b1)
    diameter = max(abs(red.b1 + red.b2), abs(red.b1 - red.b2))
    a0, b0 = _solve_coords(red, -grid.offset)
    r0 = min(
        abs(grid.offset + a * red.b1 + b * red.b2)
        for a in (math.floor(a0), math.ceil(a0))
        for b in (math.floor(b0), math.ceil(b0))
    )
    if r0 == 0.0:
        systole_grid = systole_lattice
    else:
        pts = disk_points(grid, r0 + diameter).points
        systole_grid = float(np.min(np.abs(pts)))
    return GridStats(covolume, systole_lattice, systole_grid, diameter)


def power_sum(grid: GridSpec, beta: float, x: float) -> float:
    """Sum of |m|^beta over grid points 0 < |m| <= x, by direct enumeration."""
    if x < 1.0:
        raise ValueError(f"power sums are defined for x >= 1, got {x}")
    mods = np.abs(disk_points(grid, x).points)
    if beta == 0.0:
        return float(mods.size)
    return float(np.sum(mods**beta))


def leading_term(beta: float, x: float, covolume: float) -> float:
    """Main growth term (2*pi/covolume) * x^(beta+2) / (beta+2) of the disk
    power sum; only meaningful for beta > -2."""
    if beta <= -2.0:
        raise ValueError(f"leading term requires beta > -2, got {beta}")
    if x <= 0.0:
        raise ValueError(f"x must be positive, got {x}")
    if covolume <= 0.0:
        raise ValueError(f"covolume must be positive, got {covolume}")
    return (TAU / covolume) * x ** (beta + 2.0) / (beta + 2.0)


def count_near_line(grid: GridSpec, envelope: Sequence[float], N: int) -> int:
    """Count grid points in the closed disk of radius N lying in the strip
    {x + iy : x >= 0, |y| <= g(x)} for the step envelope g.

    ``envelope`` gives the per-unit-interval maxima g_1..g_N; points with
    Re(m) in (x-1, x] read g_x, and the Re(m) = 0 column reads g_1.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    g = np.asarray(envelope, dtype=float)
    if g.size < N:
        raise ValueError(f"envelope must provide at least N={N} values")
    if np.any(g[:N] < 0.0):
        raise ValueError("envelope values must be nonnegative")
    pts = disk_points(grid, float(N)).points
    if pts.size == 0:
        return 0
    re = pts.real
    im = pts.imag
    right = re >= 0.0
    idx = np.ceil(re[right]).astype(np.int64)
    idx = np.maximum(idx, 1)
    inside = np.abs(im[right]) <= g[idx - 1]
    return int(np.count_nonzero(inside))
