"""Closed-form limit density of the scaled pair-difference measures, with
exact piecewise-radial integration.

In the finite regime the density is a pure power law between consecutive
lattice-shell radii, so integration against radial polynomials is closed
form; anything else falls back to adaptive quadrature split at every
discontinuity circle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _quadlib

from .grids import GridSpec, LatticeBasis, disk_points, reduce_basis
from .scaling import GAMMA_CLASS_TOL, LimitClass

TAU = 2.0 * math.pi

# relative slack when testing shell membership |p| <= r/(alpha*lam): the sum
# is closed, and on a discontinuity circle the returned value is the
# right-continuous (larger) one
_SHELL_EPS = 1e-12

_QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class RadialPolynomial:
    """Polynomial in r = |z|, used for closed-form integration."""

    coeffs: tuple[float, ...]

    def __call__(self, r):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * r + c
        return acc


def bump_polynomial(A: float) -> RadialPolynomial:
    """(1 - (r/A)^2)^2 as a radial polynomial (valid for r <= A)."""
    return RadialPolynomial((1.0, 0.0, -2.0 / A**2, 0.0, 1.0 / A**4))


@dataclass(eq=False)
class DensityModel:
    """Limit density rho for one (alpha, lattice, regime) triple.

    The lattice-shell cache (distinct shell radii and cumulative sums of
    |p|^(2/(1-alpha))) is built eagerly up to the requested support radius
    and extended on demand; extension is not thread-safe.
    """

    alpha: float
    lattice: LatticeBasis
    regime: LimitClass
    covolume: float
    systole: float
    _shell_radii: np.ndarray = field(default=None, repr=False)
    _shell_cums: np.ndarray = field(default=None, repr=False)
    _built_to: float = field(default=0.0, repr=False)

    @classmethod
    def build(
        cls,
        alpha: float,
        basis: LatticeBasis,
        regime: LimitClass,
        support_radius: float = 1.5,
    ) -> "DensityModel":
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        red = reduce_basis(basis)
        model = cls(
            alpha=alpha,
            lattice=red,
            regime=regime,
            covolume=abs(red.det),
            systole=abs(red.b1),
            _shell_radii=np.empty(0),
            _shell_cums=np.empty(0),
        )
        if regime.kind == "finite" and support_radius > 0.0:
            model._extend_shells(support_radius / (alpha * regime.value) + model.systole)
        return model

    def _extend_shells(self, radius: float) -> None:
        if radius <= self._built_to:
            return
        radius = max(radius, 2.0 * self.systole)
        pts = disk_points(GridSpec(self.lattice), radius).points
        mods = np.sort(np.abs(pts))
        weights = mods ** (2.0 / (1.0 - self.alpha))
        cums = np.cumsum(weights)
        # group floats that landed on the same shell radius
        last = np.nonzero(np.diff(mods, append=np.inf) > 0.0)[0]
        self._shell_radii = mods[last]
        self._shell_cums = cums[last]
        self._built_to = radius

    def shell_sum(self, x: float, side: str = "right") -> float:
        """Cumulative sum of |p|^(2/(1-alpha)) over lattice shells |p| <= x;
        side='left' excludes a shell sitting exactly at x."""
        if x <= 0.0:
            return 0.0
        self._extend_shells(x * 1.25)
        if side == "right":
            bound = x * (1.0 + _SHELL_EPS)
        else:
            bound = x * (1.0 - _SHELL_EPS)
        k = int(np.searchsorted(self._shell_radii, bound, side="right"))
        return float(self._shell_cums[k - 1]) if k > 0 else 0.0

    def discontinuity_radii(self, A: float) -> np.ndarray:
        """Radii alpha*lam*|p| of the density's jump circles, up to A."""
        if self.regime.kind != "finite":
            return np.empty(0)
        scale = self.alpha * self.regime.value
        self._extend_shells(A / scale * 1.25)
        radii = scale * self._shell_radii
        return radii[radii <= A * (1.0 + _SHELL_EPS)]


def asymptote(model: DensityModel) -> float:
    """Constant value pi / (alpha^2 * (2-alpha) * covolume^2): the zero-regime
    density and the large-radius limit of the finite-regime density."""
    if model.regime.kind == "infinite":
        raise ValueError("constant level is undefined in the infinite regime")
    a = model.alpha
    return math.pi / (a * a * (2.0 - a) * model.covolume**2)


def repulsion_radius(model: DensityModel) -> float:
    """alpha * lam * systole: the density vanishes on this open disk."""
    if model.regime.kind != "finite":
        raise ValueError("repulsion radius is defined in the finite regime only")
    return model.alpha * model.regime.value * model.systole


def _finite_prefactor(model: DensityModel) -> float:
    a = model.alpha
    return a ** (2.0 / (1.0 - a)) / ((1.0 - a) * model.covolume)


def _decay_exponent(alpha: float) -> float:
    return (4.0 - 2.0 * alpha) / (1.0 - alpha)


def rho(model: DensityModel, z, side: str = "right") -> float:
    """Density at z (complex, or a radius; rotation invariant).

    On a jump circle the right-continuous value is returned by default;
    side='left' gives the other one-sided value.
    """
    kind = model.regime.kind
    if kind == "infinite":
        return 0.0
    if kind == "zero":
        return asymptote(model)
    r = abs(z)
    if r == 0.0:
        return 0.0
    lam = model.regime.value
    s = model.shell_sum(r / (model.alpha * lam), side)
    if s == 0.0:
        return 0.0
    return _finite_prefactor(model) * (r / lam) ** (-_decay_exponent(model.alpha)) * s


def rho_radial(model: DensityModel, r: float, side: str = "right") -> float:
    """Radial profile 2*pi*r*rho(r) of the rotation-invariant density."""
    if r < 0.0:
        raise ValueError("radius must be >= 0")
    return TAU * r * rho(model, r, side)


def _pieces(model: DensityModel, r_lo: float, r_hi: float):
    """(a, b, coefficient) per smooth piece: rho(r) = coefficient * r^(-q)
    on (a, b), with q = 0 in the zero regime."""
    if model.regime.kind == "zero":
        return [(r_lo, r_hi, asymptote(model))]
    scale = model.alpha * model.regime.value
    cuts = model.discontinuity_radii(r_hi)
    cuts = cuts[(cuts > r_lo * (1.0 + _SHELL_EPS)) & (cuts < r_hi * (1.0 - _SHELL_EPS))]
    edges = np.concatenate([[r_lo], cuts, [r_hi]])
    lam = model.regime.value
    pref = _finite_prefactor(model) * lam ** _decay_exponent(model.alpha)
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        s = model.shell_sum(a / scale, "right") if a > 0.0 else 0.0
        out.append((float(a), float(b), pref * s))
    return out


def _integrate_power(a: float, b: float, e: float) -> float:
    """Integral of r^(e-1) over (a, b) (log branch when e = 0)."""
    if abs(e) < 1e-12:
        return math.log(b / a)
    return (b**e - a**e) / e


def integrate_window(model: DensityModel, f, r_lo: float, r_hi: float) -> float:
    """Integral of f against the density over the annulus r_lo <= |z| <= r_hi.

    ``f`` is a :class:`RadialPolynomial` (closed form) or a callable of the
    radius (adaptive quadrature, relative tolerance 1e-8, split at every
    discontinuity circle).
    """
    if not 0.0 <= r_lo < r_hi:
        raise ValueError("need 0 <= r_lo < r_hi")
    if model.regime.kind == "infinite":
        return 0.0
    q = 0.0 if model.regime.kind == "zero" else _decay_exponent(model.alpha)
    total = 0.0
    for a, b, coef in _pieces(model, r_lo, r_hi):
        if coef == 0.0:
            continue
        if isinstance(f, RadialPolynomial):
            for j, c in enumerate(f.coeffs):
                if c == 0.0:
                    continue
                total += TAU * coef * c * _integrate_power(a, b, j + 2.0 - q)
        else:
            val, _ = _quadlib.quad(
                lambda r: TAU * r * f(r) * coef * (r**-q if q else 1.0),
                a,
                b,
                epsrel=_QUAD_RTOL,
                limit=200,
            )
            total += val
    return total


def integrate_against(model: DensityModel, f, A: float) -> float:
    """Integral of f against the density over the disk |z| <= A."""
    if A <= 0.0:
        raise ValueError("support radius A must be positive")
    if model.regime.kind == "infinite":
        return 0.0
    lo = 0.0
    if model.regime.kind == "finite":
        lo = min(repulsion_radius(model), A) * (1.0 - 1e-9)  # rho = 0 below
    if lo >= A:
        return 0.0
    return integrate_window(model, f, lo, A)


def annulus_mass(model: DensityModel, r_lo: float, r_hi: float) -> float:
    """Mass the density assigns to the annulus r_lo <= |z| <= r_hi."""
    return integrate_window(model, RadialPolynomial((1.0,)), r_lo, r_hi)


def rho_intro(alpha: float, gamma: float, basis: LatticeBasis, z) -> float:
    """Density of the root-pair measure with power-law scaling N^gamma:
    dispatches on gamma vs 1 - alpha.  Stated for unimodular lattices; other
    covolumes use the general covolume-weighted formula (a warning flags the
    deviation)."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    d = gamma - (1.0 - alpha)
    if d > GAMMA_CLASS_TOL:
        regime = LimitClass.infinite()
    elif d < -GAMMA_CLASS_TOL:
        regime = LimitClass.zero()
    else:
        regime = LimitClass.finite(1.0)
    model = DensityModel.build(alpha, basis, regime, support_radius=abs(z) + 1.0)
    if abs(model.covolume - 1.0) > 1e-9:
        warnings.warn(
            "lattice is not unimodular; returning the covolume-weighted density",
            stacklevel=2,
        )
    return rho(model, z)
