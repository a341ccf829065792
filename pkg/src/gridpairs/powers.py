"""Fractional complex powers with the branch cut on the positive real axis,
split into winding levels, plus the angular-sector change of variables."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TAU = 2.0 * math.pi

# arguments this close below the cut are rounding artefacts and snap to 0
_NEG_CLAMP = 1e-15

BRANCH_LEVEL_ZERO = 0
BRANCH_LEVEL_MINUS_ONE = -1


def theta(z: complex) -> float:
    """Argument representative in [0, 2*pi); exactly 0 on the positive reals.

    The cut sits on the positive real axis and the value there is the upper
    (Im >= 0) limit.
    """
    if z == 0:
        raise ValueError("argument of zero is undefined")
    a = math.atan2(z.imag, z.real)
    if -_NEG_CLAMP < a < 0.0:
        a = 0.0
    if a < 0.0:
        a += TAU
    return a + 0.0  # normalises -0.0


def theta_array(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Vectorised :func:`theta` over coordinate arrays."""
    a = np.arctan2(im, re)
    a = np.where((a > -_NEG_CLAMP) & (a < 0.0), 0.0, a)
    a = np.where(a < 0.0, a + TAU, a)
    return a + 0.0


def level_power(z: complex, beta: float, level: int = 0) -> complex:
    """|z|^beta * exp(i*beta*w) with w the argument representative in
    [2*pi*level, 2*pi*(level+1))."""
    w = beta * (theta(z) + TAU * level)
    r = abs(z) ** beta
    return complex(r * math.cos(w), r * math.sin(w))


@dataclass(frozen=True)
class LevelPowerParams:
    """Exponent in (0, 1) together with a winding level."""

    alpha: float
    level: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")

    def apply(self, z: complex) -> complex:
        return level_power(z, self.alpha, self.level)


def ratio_branch(z: complex, z_prime: complex) -> int:
    """Branch level l in {0, -1} such that, for every k,
    z^[beta,k] / z_prime^[beta,k] = (z/z_prime)^[beta,l].

    l = 0 when theta(z) >= theta(z_prime), else l = -1; this two-case
    dichotomy is exactly what the positive-real-axis cut buys.
    """
    if theta(z) >= theta(z_prime):
        return BRANCH_LEVEL_ZERO
    return BRANCH_LEVEL_MINUS_ONE


def roots(m: complex, b: int) -> list[complex]:
    """The b distinct b-th roots of m, ordered by winding level."""
    if m == 0:
        raise ValueError("roots of zero are degenerate")
    if not isinstance(b, int) or b < 2:
        raise ValueError(f"root order must be an integer >= 2, got {b}")
    return [level_power(m, 1.0 / b, j) for j in range(b)]


@dataclass(frozen=True)
class SectorSpec:
    """Open angular sector attached to a reference direction p and a level.

    The sector spans arguments theta(p) - (1-alpha)*2*pi*(level, level+1);
    ``inner_radius`` optionally pins the excluded disk radius used by
    :func:`sector_classify` (when 0, it is derived from N and phi there).
    """

    p: complex
    level: int
    alpha: float
    inner_radius: float = 0.0

    def __post_init__(self) -> None:
        if self.p == 0:
            raise ValueError("reference direction p must be nonzero")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.inner_radius < 0.0:
            raise ValueError("inner_radius must be >= 0")


def _sector_interval(spec: SectorSpec) -> tuple[float, float]:
    width = (1.0 - spec.alpha) * TAU
    hi = theta(spec.p) - width * spec.level
    return hi - width, hi


def change_var_h(spec: SectorSpec, z: complex) -> complex:
    """z -> |z|^(-1/(1-alpha)) * exp(-i*w/(1-alpha)) with w the argument
    representative inside the open sector; boundary rays are rejected."""
    if z == 0:
        raise ValueError("change of variables is undefined at zero")
    lo, hi = _sector_interval(spec)
    a = math.atan2(z.imag, z.real)
    w = a + TAU * math.floor((hi - a) / TAU)
    if not lo < w < hi:
        raise ValueError("point lies outside the open angular sector")
    s = -1.0 / (1.0 - spec.alpha)
    return cmath.rect(abs(z) ** s, s * w)


def _angular_rep(a: float, lo: float, hi: float, tol: float) -> tuple[float | None, bool]:
    """Representative of a (mod 2*pi) in the open interval (lo, hi), plus a
    flag marking proximity to either boundary ray."""
    width = hi - lo
    s = math.fmod(a - lo, TAU)
    if s < 0.0:
        s += TAU
    near = min(s, TAU - s, abs(s - width)) <= tol
    if 0.0 < s < width:
        return lo + s, near
    return None, near


def _half_plane_side(angle: float, axis: float, tol: float) -> tuple[bool, bool]:
    """Whether ``angle`` lies in (axis - pi, axis) mod 2*pi, plus a proximity
    flag for the splitting line."""
    t = math.fmod(angle - (axis - math.pi), TAU)
    if t < 0.0:
        t += TAU
    near = min(t, TAU - t, abs(t - math.pi)) <= tol
    return 0.0 < t < math.pi, near


def half_memberships(
    spec: SectorSpec, z: complex, N: float, phi: float, tol: float = 1e-9
) -> tuple[bool, bool, bool]:
    """(direct, mirrored, boundary) membership flags for ``z``.

    ``direct``: z sits in the half of the sector accounted by the sector's
    own inverse change of variables (its image lands in the half-disk of
    radius N*|scale| whose defining argument is -alpha*theta(p)/(1-alpha)).
    ``mirrored``: -z sits in the corresponding half for the antipodal
    direction -p.  ``boundary``: within angular tolerance of a defining
    ray, or radial tolerance of the excluded-disk circle.
    """
    if z == 0:
        return False, False, True
    alpha = spec.alpha
    r_inner = spec.inner_radius
    if r_inner == 0.0:
        r_inner = alpha * abs(spec.p) * phi / N ** (1.0 - alpha)
    r = abs(z)
    boundary = abs(r - r_inner) <= tol * max(1.0, r_inner)
    if r < r_inner:
        return False, False, boundary
    shrink = 1.0 / (1.0 - alpha)

    def side(direction: complex, w_angle: float) -> bool:
        lo, hi = _sector_interval(SectorSpec(direction, spec.level, alpha))
        rep, near_sector = _angular_rep(w_angle, lo, hi, tol)
        nonlocal boundary
        boundary = boundary or near_sector
        if rep is None:
            return False
        axis = -alpha * theta(direction) * shrink
        inside, near_split = _half_plane_side(-rep * shrink, axis, tol)
        boundary = boundary or near_split
        return inside

    direct = side(spec.p, math.atan2(z.imag, z.real))
    mirrored = side(-spec.p, math.atan2(-z.imag, -z.real))
    return direct and not boundary, mirrored and not boundary, boundary


def sector_classify(
    spec: SectorSpec, z: complex, N: float, phi: float, tol: float = 1e-9
) -> str:
    """Classify z as ``direct``, ``mirrored``, ``outside`` or ``boundary``
    relative to the two-halves decomposition of the sector beyond the
    excluded disk.  Away from boundaries the two classes partition the
    sector; ambiguity is quarantined as ``boundary``."""
    direct, mirrored, boundary = half_memberships(spec, z, N, phi, tol)
    if boundary or (direct and mirrored):
        return "boundary"
    if direct:
        return "direct"
    if mirrored:
        return "mirrored"
    return "outside"
