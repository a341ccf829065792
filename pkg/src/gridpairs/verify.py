"""Machine-checkable property suite over all modules, with a deliberately
corruptible branch cut as a negative control.

Each check returns a :class:`CheckResult`; the CLI turns failures into a
nonzero exit.  Checks that probe the branch-cut choice accept an injectable
implementation so the suite can demonstrate that moving the cut to the
negative real axis breaks them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .correlations import CorrelationConfig, build_level_measure, decompose_pm
from .grids import (
    GridSpec,
    count_near_line,
    enumerate_disk,
    grid_stats,
    leading_term,
    power_sum,
)
from .powers import (
    TAU,
    SectorSpec,
    change_var_h,
    half_memberships,
    level_power,
    ratio_branch,
    roots,
    theta,
)
from .scaling import ScalingRegime


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class BranchImpl:
    """Argument function defining the branch cut, plus the powers built on it."""

    arg: Callable[[complex], float]

    def power(self, z: complex, beta: float, level: int = 0) -> complex:
        w = beta * (self.arg(z) + TAU * level)
        r = abs(z) ** beta
        return complex(r * math.cos(w), r * math.sin(w))

    def branch(self, z: complex, z_prime: complex) -> int:
        return 0 if self.arg(z) >= self.arg(z_prime) else -1


STANDARD_BRANCH = BranchImpl(arg=theta)

# negative control: principal argument in (-pi, pi], cut on the negative reals
PRINCIPAL_BRANCH = BranchImpl(arg=lambda z: math.atan2(z.imag, z.real))


def _sorted_complex(arr: np.ndarray) -> np.ndarray:
    order = np.lexsort((arr.imag, arr.real))
    return arr[order]


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name, bool(passed), detail)


def check_power_sum_growth(grid: GridSpec) -> CheckResult:
    """Disk power sums track their main growth term within the decaying
    envelope 10/x at every sampled radius (the pointwise errors oscillate,
    so the decay is checked through the envelope, not term by term)."""
    stats = grid_stats(grid)
    worst = 0.0
    for beta in (1.0, 3.0, 2.0 / (1.0 - 1.0 / 3.0), 2.0 / (1.0 - 0.5)):
        for x in (20.0, 40.0, 80.0):
            ratio = power_sum(grid, beta, x) / leading_term(beta, x, stats.covolume)
            worst = max(worst, abs(ratio - 1.0) * x)
    return _result(
        "power-sum-growth", worst <= 10.0, f"worst scaled error x*|ratio-1| = {worst:.3f}"
    )


def check_gauss_sandwich(grid: GridSpec) -> CheckResult:
    """pi/covol * max(0, x-diam)^2 <= disk count <= pi/covol * (x+diam)^2."""
    stats = grid_stats(grid)
    for x in (0.0, 0.5, 1.0, 3.7, 10.0, 25.0):
        card = enumerate_disk(grid, x).size
        lo = math.pi / stats.covolume * max(0.0, x - stats.diameter) ** 2
        hi = math.pi / stats.covolume * (x + stats.diameter) ** 2
        if not lo <= card <= hi:
            return _result("gauss-disk-sandwich", False, f"violated at x={x}")
    return _result("gauss-disk-sandwich", True, "bounds hold on the sample radii")


def check_near_line(grid: GridSpec, seed: int) -> CheckResult:
    """Near-line counts equal a brute-force scan and obey the area bound."""
    rng = np.random.default_rng(seed)
    stats = grid_stats(grid)
    for _ in range(5):
        n = int(rng.integers(3, 12))
        g = rng.uniform(0.0, 2.5, size=n)
        got = count_near_line(grid, g, n)
        pts = enumerate_disk(grid, float(n))
        idx = np.maximum(np.ceil(pts.real), 1.0).astype(int)
        ok = (pts.real >= 0.0) & (np.abs(pts.imag) <= g[np.clip(idx, 1, n) - 1])
        ok &= idx <= n
        brute = int(np.count_nonzero(ok))
        bound = 4.0 * np.sum((1.0 + stats.diameter) * (g + stats.diameter)) / stats.covolume
        if got != brute or got > bound:
            return _result(
                "near-line-count", False, f"got {got}, brute {brute}, bound {bound:.1f}"
            )
    return _result("near-line-count", True, "matches brute force and the area bound")


def check_branch_ratio_contract(seed: int, impl: BranchImpl = STANDARD_BRANCH) -> CheckResult:
    """z^[b,k]/w^[b,k] equals (z/w)^[b,l] with l in {0,-1} picked by the
    argument order; this dichotomy needs the positive-real-axis cut."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    samples = 0
    while samples < 4000:
        z = complex(rng.normal(), rng.normal())
        w = complex(rng.normal(), rng.normal())
        if abs(z) < 1e-3 or abs(w) < 1e-3:
            continue
        samples += 1
        beta = rng.uniform(0.05, 0.95)
        k = int(rng.integers(-3, 4))
        lhs = impl.power(z, beta, k) / impl.power(w, beta, k)
        rhs = impl.power(z / w, beta, impl.branch(z, w))
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    # boundary pairs with equal arguments
    for t in (0.3, 1.0, 2.0):
        z = complex(t, 0.0)
        w = complex(2 * t, 0.0)
        lhs = impl.power(z, 0.5, 1) / impl.power(w, 0.5, 1)
        rhs = impl.power(z / w, 0.5, impl.branch(z, w))
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return _result(
        "branch-ratio-contract", worst <= 1e-12, f"worst relative error {worst:.3e}"
    )


def check_symmetry_decomposition(
    grid: GridSpec, impl: BranchImpl = STANDARD_BRANCH
) -> CheckResult:
    """On a small disk, the plus/minus split mirrors exactly, and every plus
    pair satisfies the ratio-branch product formula
    n^[a,k] - m^[a,k] = m^[a,k] * ((n/m)^[a,0] - 1)."""
    alpha, k, n_max = 1.0 / 3.0, 1, 6.0
    pts = enumerate_disk(grid, n_max)
    plus, minus = [], []
    worst = 0.0
    for i in range(pts.size):
        for j in range(pts.size):
            if i == j:
                continue
            m, n = pts[i], pts[j]
            am, an = impl.arg(m), impl.arg(n)
            if an == am:
                continue
            v = impl.power(n, alpha, k) - impl.power(m, alpha, k)
            if an > am:
                plus.append(v)
                formula = impl.power(m, alpha, k) * (impl.power(n / m, alpha, 0) - 1.0)
                worst = max(worst, abs(v - formula) / max(abs(v), 1e-300))
            else:
                minus.append(v)
    plus_arr = _sorted_complex(np.array(plus))
    minus_arr = _sorted_complex(-np.array(minus))
    mirror = plus_arr.size == minus_arr.size and np.array_equal(plus_arr, minus_arr)
    passed = mirror and worst <= 1e-12
    return _result(
        "pair-symmetry-and-branch-formula",
        passed,
        f"mirror={'exact' if mirror else 'BROKEN'}, worst formula error {worst:.3e}",
    )


def check_change_var_identity(seed: int, samples: int = 10_000) -> CheckResult:
    """h_{p,k}(phi*a*p / m^[1-a,k]) = (phi*a*p)^[-1/(1-a),0] * m."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < samples:
        alpha = rng.uniform(0.05, 0.9)
        p = complex(rng.normal(), rng.normal())
        m = complex(rng.normal(), rng.normal())
        if abs(p) < 0.2 or abs(m) < 0.2:
            continue
        t = theta(m)
        if t < 1e-9 or t > TAU - 1e-9:
            continue
        k = int(rng.integers(-4, 5))
        phi = rng.uniform(0.5, 30.0)
        done += 1
        z = phi * alpha * p / level_power(m, 1.0 - alpha, k)
        lhs = change_var_h(SectorSpec(p, k, alpha), z)
        rhs = level_power(phi * alpha * p, -1.0 / (1.0 - alpha), 0) * m
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return _result(
        "change-of-variable-identity", worst <= 1e-12, f"worst relative error {worst:.3e}"
    )


def check_sector_split(seed: int, samples: int = 100_000, tol: float = 1e-9) -> CheckResult:
    """Uniform samples in the sector annulus land in exactly one of the two
    halves; boundary-flagged fraction stays below 1e-3."""
    rng = np.random.default_rng(seed)
    n_boundary = 0
    n_double = 0
    n_neither = 0
    big_n = 400.0
    for _ in range(samples):
        alpha = rng.uniform(0.1, 0.85)
        p = complex(rng.normal(), rng.normal())
        if abs(p) < 0.2:
            p = complex(0.7, 0.9)
        k = int(rng.integers(-3, 4))
        phi = big_n ** (1.0 - alpha) * rng.uniform(0.5, 2.0)
        spec = SectorSpec(p, k, alpha)
        r_inner = alpha * abs(p) * phi / big_n ** (1.0 - alpha)
        width = (1.0 - alpha) * TAU
        hi = theta(p) - width * k
        w = rng.uniform(hi - width, hi)
        r = rng.uniform(r_inner, 3.0 * r_inner + 1.0)
        z = complex(r * math.cos(w), r * math.sin(w))
        direct, mirrored, boundary = half_memberships(spec, z, big_n, phi, tol)
        if boundary:
            n_boundary += 1
        elif direct and mirrored:
            n_double += 1
        elif not (direct or mirrored):
            n_neither += 1
    passed = n_double == 0 and n_neither == 0 and n_boundary < 1e-3 * samples
    return _result(
        "sector-split-montecarlo",
        passed,
        f"double={n_double}, unclassified={n_neither}, boundary={n_boundary}/{samples}",
    )


def check_linear_approximation() -> CheckResult:
    """|(1+z)^a - 1 - a*z| <= |z|^2 for |z| <= 0.1, Im(z) >= 0."""
    radii = np.linspace(1e-4, 0.1, 60)
    angles = np.linspace(0.0, math.pi, 121)
    worst = 0.0
    for alpha in (1.0 / 3.0, 0.5, 23.0 / 42.0):
        for r in radii:
            for a in angles:
                z = complex(r * math.cos(a), r * math.sin(a))
                err = abs(level_power(1 + z, alpha, 0) - 1.0 - alpha * z)
                worst = max(worst, err / (r * r))
    return _result(
        "linear-approximation-bound", worst <= 1.0, f"worst |err|/|z|^2 = {worst:.4f}"
    )


def check_roots_identity(seed: int) -> CheckResult:
    """Each listed b-th root, raised to the b, recovers the input."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(500):
        m = complex(rng.normal(), rng.normal())
        if abs(m) < 1e-3:
            continue
        b = int(rng.integers(2, 7))
        rs = roots(m, b)
        if len(set(np.round(np.array(rs), 12).tolist())) != b:
            return _result("roots-identity", False, "roots not pairwise distinct")
        for u in rs:
            worst = max(worst, abs(u**b - m) / abs(m))
    return _result("roots-identity", worst <= 1e-12, f"worst relative error {worst:.3e}")


def check_level_rotation(seed: int) -> CheckResult:
    """z^[b,k] = exp(i*2*pi*b*k) * z^[b,0] to 1e-13."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(2000):
        z = complex(rng.normal(), rng.normal())
        if abs(z) < 1e-3:
            continue
        beta = rng.uniform(0.05, 0.95)
        k = int(rng.integers(-6, 7))
        lhs = level_power(z, beta, k)
        rhs = complex(math.cos(TAU * beta * k), math.sin(TAU * beta * k)) * level_power(
            z, beta, 0
        )
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return _result("level-shift-rotation", worst <= 1e-13, f"worst {worst:.3e}")


def check_pruned_equals_brute(grid: GridSpec) -> CheckResult:
    """Pruned and brute-force enumerations produce identical clouds."""
    for alpha in (1.0 / 3.0, 23.0 / 42.0):
        for gamma in (0.25, 1.0 - alpha):
            for n in (10, 20):
                kw = dict(
                    alpha=alpha,
                    grid=grid,
                    N=n,
                    scaling=ScalingRegime.power_law(gamma),
                    n_second=2,
                )
                a = build_level_measure(
                    CorrelationConfig(enumeration="pruned", **kw)
                )
                b = build_level_measure(
                    CorrelationConfig(enumeration="brute", **kw)
                )
                if a.count != b.count or not np.array_equal(
                    _sorted_complex(a.points), _sorted_complex(b.points)
                ):
                    return _result(
                        "pruned-equals-brute",
                        False,
                        f"mismatch at alpha={alpha}, gamma={gamma}, N={n}",
                    )
    return _result("pruned-equals-brute", True, "identical clouds on the sample matrix")


def check_rational_periodicity(grid: GridSpec) -> CheckResult:
    """For alpha = 2/5, the level measures with n_second = 5 and 10 coincide
    as weighted measures: levels k and k+5 rotate the same canonical cloud
    by the same angle, so the second-half points match the first pointwise
    in construction order (an explicit multiset bijection)."""
    kw = dict(alpha=0.4, grid=grid, N=20, scaling=ScalingRegime.power_law(0.6))
    c5 = build_level_measure(CorrelationConfig(n_second=5, **kw))
    c10 = build_level_measure(CorrelationConfig(n_second=10, **kw))
    if c10.count != 2 * c5.count or not math.isclose(
        c10.weight, c5.weight / 2.0, rel_tol=1e-12
    ):
        return _result("rational-periodicity", False, "count/weight mismatch")
    n = c5.count
    if not np.array_equal(c10.points[:n], c5.points):
        return _result("rational-periodicity", False, "first-period points differ")
    gap = float(np.max(np.abs(c10.points[n:] - c5.points))) if n else 0.0
    scale = float(np.max(np.abs(c5.points))) if n else 1.0
    gap /= max(scale, 1e-300)
    return _result("rational-periodicity", gap <= 1e-12, f"max relative point gap {gap:.3e}")


def check_decomposition_mirror(grid: GridSpec) -> CheckResult:
    """decompose_pm: minus = -plus exactly; diagonal part disjoint."""
    cfg = CorrelationConfig(
        alpha=1.0 / 3.0,
        grid=grid,
        N=20,
        scaling=ScalingRegime.power_law(2.0 / 3.0),
        n_second=3,
        enumeration="pruned",
    )
    plus, minus, diag = decompose_pm(cfg)
    total = build_level_measure(cfg)
    if plus.count + minus.count + diag.count != total.count:
        return _result("plus-minus-decomposition", False, "partition does not add up")
    if plus.count != minus.count:
        return _result("plus-minus-decomposition", False, "plus/minus counts differ")
    a = _sorted_complex(plus.points)
    b = _sorted_complex(-minus.points)
    exact = np.array_equal(a, b)
    return _result(
        "plus-minus-decomposition", exact, "minus is the exact mirror of plus"
        if exact else "mirror broken"
    )


def run_suite(
    grid: GridSpec,
    seed: int = 0,
    corrupt_branch_cut: bool = False,
    light: bool = False,
) -> list[CheckResult]:
    """All property checks on one grid; ``corrupt_branch_cut`` swaps in the
    principal-argument branch for the cut-sensitive checks (they must then
    fail, which regression-guards the branch choice)."""
    impl = PRINCIPAL_BRANCH if corrupt_branch_cut else STANDARD_BRANCH
    sector_samples = 20_000 if light else 100_000
    cov_samples = 2_000 if light else 10_000
    return [
        check_power_sum_growth(grid),
        check_gauss_sandwich(grid),
        check_near_line(grid, seed),
        check_branch_ratio_contract(seed, impl),
        check_symmetry_decomposition(grid, impl),
        check_change_var_identity(seed, cov_samples),
        check_sector_split(seed, sector_samples),
        check_linear_approximation(),
        check_roots_identity(seed),
        check_level_rotation(seed),
        check_pruned_equals_brute(grid),
        check_rational_periodicity(grid),
        check_decomposition_mirror(grid),
    ]
