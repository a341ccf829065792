"""Empirical pair-difference measures: builders, decomposition, pruning,
histograms.

The independent oracle here is `oracle_level_values`: a plain double loop
over enumerated points computing scalar level powers, with no rotation
factoring and no pruning.
"""

import cmath
import math

import numpy as np
import pytest

from gridpairs import (
    SQUARE,
    HEXAGONAL,
    CorrelationConfig,
    GridSpec,
    ScalingRegime,
    build_full_measure,
    build_level_measure,
    build_measure,
    build_roots_measure,
    bump,
    cross_level_count,
    decompose_pm,
    enumerate_disk,
    evaluate,
    level_power,
    planar_histogram,
    prune_radius,
    radial_histogram,
    roots,
    theta,
)
from gridpairs.correlations import WeightedPointCloud

OFFSET_SQUARE = GridSpec(SQUARE.basis, 0.5 + 0.5j)


def sorted_complex(arr):
    arr = np.asarray(arr, dtype=np.complex128)
    return arr[np.lexsort((arr.imag, arr.real))]


def assert_multiset_close(got, want, tol=1e-12):
    """Multiset equality up to per-point noise << tol.

    Sorting complex values is unstable under 1e-15 perturbations of tied
    keys, so this combines equal counts, symmetric nearest-neighbour
    coverage, sorted moduli, and first/second moments instead.
    """
    got = np.asarray(got, dtype=np.complex128)
    want = np.asarray(want, dtype=np.complex128)
    assert got.size == want.size
    if got.size == 0:
        return
    from scipy.spatial import cKDTree

    a = np.column_stack([got.real, got.imag])
    b = np.column_stack([want.real, want.imag])
    assert float(cKDTree(b).query(a)[0].max()) <= tol
    assert float(cKDTree(a).query(b)[0].max()) <= tol
    assert float(np.max(np.abs(np.sort(np.abs(got)) - np.sort(np.abs(want))))) <= tol
    scale = max(float(np.max(np.abs(want))), 1.0)
    assert abs(np.sum(got) - np.sum(want)) <= tol * got.size * scale
    assert abs(np.sum(got * got) - np.sum(want * want)) <= tol * got.size * scale**2


def oracle_level_values(grid, alpha, N, phi, A, k):
    """All level-k scaled differences inside the support disk, brute force."""
    pts = enumerate_disk(grid, float(N))
    out = []
    for m in pts:
        for n in pts:
            if n == m:
                continue
            v = phi * (level_power(n, alpha, k) - level_power(m, alpha, k))
            if abs(v) <= A:
                out.append(v)
    return np.array(out, dtype=np.complex128)


def oracle_roots_values(grid, alpha, b, N, phi, A):
    pts = enumerate_disk(grid, float(N))
    out = []
    for m in pts:
        for n in pts:
            if n == m:
                continue
            for u in roots(m, b):
                for v in roots(n, b):
                    d = phi * (v - u)
                    if abs(d) <= A:
                        out.append(d)
    return np.array(out, dtype=np.complex128)


def config(**kw):
    base = dict(
        alpha=0.5,
        grid=SQUARE,
        N=10,
        scaling=ScalingRegime.power_law(0.5),
        support_radius=1.5,
        n_prime=0,
        n_second=1,
        enumeration="pruned",
    )
    base.update(kw)
    return CorrelationConfig(**base)


class TestConfigValidation:
    def test_roots_requires_reciprocal_alpha(self):
        with pytest.raises(ValueError):
            config(mode="roots", roots_b=2, alpha=23.0 / 42.0, n_second=2)

    def test_roots_requires_level_count(self):
        with pytest.raises(ValueError):
            config(mode="roots", roots_b=2, alpha=0.5, n_second=3)

    def test_roots_requires_power_law(self):
        with pytest.raises(ValueError):
            config(
                mode="roots",
                roots_b=2,
                alpha=0.5,
                n_second=2,
                scaling=ScalingRegime.proportional(1.0),
            )

    def test_level_counts(self):
        with pytest.raises(ValueError):
            config(n_second=0)
        with pytest.raises(ValueError):
            config(n_prime=-1)

    def test_mode_dispatch_guard(self):
        with pytest.raises(ValueError):
            build_full_measure(config(mode="level"))
        with pytest.raises(ValueError):
            build_roots_measure(config(mode="level"))


class TestLevelMeasure:
    def test_four_point_disk(self):
        # N=1 on the square grid: 4 points, 12 ordered pairs, phi(1)=1, psi(1)=1
        cfg = config(N=1, support_radius=3.0, enumeration="brute")
        cloud = build_level_measure(cfg)
        assert cloud.count == 12
        assert cloud.weight == pytest.approx(1.0)
        assert cloud.total_raw_pairs == 12
        target = cmath.exp(1j * math.pi / 4.0) - 1.0  # pair (n=i, m=1)
        assert np.min(np.abs(cloud.points - target)) < 1e-15

    def test_empty_support(self):
        cfg = config(N=1, support_radius=1e-6)
        cloud = build_level_measure(cfg)
        assert cloud.count == 0
        assert cloud.weight > 0.0

    def test_matches_oracle_single_level(self):
        for grid in (SQUARE, OFFSET_SQUARE):
            cfg = config(grid=grid, N=6, alpha=1.0 / 3.0, support_radius=2.0)
            cloud = build_level_measure(cfg)
            want = oracle_level_values(grid, 1.0 / 3.0, 6, cfg.phi(), 2.0, 0)
            assert_multiset_close(cloud.points, want)

    def test_matches_oracle_multi_level(self):
        cfg = config(N=5, alpha=0.4, n_prime=1, n_second=2, support_radius=2.0)
        cloud = build_level_measure(cfg)
        want = np.concatenate(
            [oracle_level_values(SQUARE, 0.4, 5, cfg.phi(), 2.0, k) for k in (-1, 0, 1)]
        )
        assert_multiset_close(cloud.points, want)

    def test_level_rotation_structure(self):
        cfg = config(N=8, alpha=0.3, n_second=4)
        cloud = build_level_measure(cfg)
        base = build_level_measure(config(N=8, alpha=0.3, n_second=1))
        n = base.count
        assert cloud.count == 4 * n
        for k in range(4):
            rot = cmath.exp(1j * 2.0 * math.pi * 0.3 * k)
            gap = np.abs(cloud.points[k * n : (k + 1) * n] - rot * base.points)
            assert float(np.max(gap)) < 1e-13 * max(1.0, float(np.max(np.abs(base.points))))

    def test_radial_profile_level_invariance(self):
        # rotations preserve moduli, so the histogram only sees n'+n''
        edges = np.linspace(0.0, 1.5, 31)
        h1 = radial_histogram(build_level_measure(config(N=12, n_prime=0, n_second=3)), edges)
        h2 = radial_histogram(build_level_measure(config(N=12, n_prime=2, n_second=1)), edges)
        assert np.allclose(h1.mass, h2.mass, rtol=0.0, atol=1e-15)

    def test_rational_periodicity(self):
        kw = dict(alpha=0.4, grid=SQUARE, N=30, scaling=ScalingRegime.power_law(0.6))
        c5 = build_level_measure(CorrelationConfig(n_second=5, **kw))
        c10 = build_level_measure(CorrelationConfig(n_second=10, **kw))
        assert c10.count == 2 * c5.count
        assert c10.weight == pytest.approx(c5.weight / 2.0, rel=1e-14)
        n = c5.count
        assert np.array_equal(c10.points[:n], c5.points)
        scale = float(np.max(np.abs(c5.points)))
        assert float(np.max(np.abs(c10.points[n:] - c5.points))) <= 1e-12 * scale

    def test_mass_accounting(self):
        cfg = config(N=12, n_second=2)
        cloud = build_level_measure(cfg)
        assert cloud.total_mass == pytest.approx(cloud.weight * cloud.count)
        wide = build_level_measure(config(N=12, n_second=2, support_radius=3.0))
        assert wide.total_mass >= cloud.total_mass


class TestFullMeasure:
    def test_adjacent_level_pair(self):
        cfg = config(N=1, n_second=2, mode="full", support_radius=3.0, enumeration="brute")
        cloud = build_full_measure(cfg)
        # pair (n=1, m=i) at k=0: higher level on n since theta(1) < theta(i)
        target = -1.0 - cmath.exp(1j * math.pi / 4.0)
        assert np.min(np.abs(cloud.points - target)) < 1e-15

    def test_single_level_equals_level_measure(self):
        full = build_full_measure(config(N=7, n_second=1, mode="full"))
        lvl = build_level_measure(config(N=7, n_second=1))
        assert full.count == lvl.count
        assert np.array_equal(sorted_complex(full.points), sorted_complex(lvl.points))

    def test_full_vs_roots_difference(self):
        # the root-pair cloud adds exactly the adjacent-level pairs whose
        # argument order disagrees with the cut crossing
        kw = dict(
            alpha=0.5, grid=SQUARE, N=20, scaling=ScalingRegime.power_law(0.5),
            support_radius=1.5, enumeration="brute",
        )
        full = build_full_measure(CorrelationConfig(mode="full", n_second=2, **kw))
        rts = build_roots_measure(CorrelationConfig(mode="roots", roots_b=2, n_second=2, **kw))
        assert rts.weight == pytest.approx(full.weight, rel=1e-12)
        # brute-force the missing orientation: levels (n:1, m:0) with
        # theta(n) >= theta(m) and (n:0, m:1) with theta(n) <= theta(m)
        pts = enumerate_disk(SQUARE, 20.0)
        phi = CorrelationConfig(mode="full", n_second=2, **kw).phi()
        extra = []
        for m in pts:
            for n in pts:
                if n == m:
                    continue
                if theta(n) >= theta(m):
                    v = phi * (level_power(n, 0.5, 1) - level_power(m, 0.5, 0))
                    if abs(v) <= 1.5:
                        extra.append(v)
                if theta(n) <= theta(m):
                    v = phi * (level_power(n, 0.5, 0) - level_power(m, 0.5, 1))
                    if abs(v) <= 1.5:
                        extra.append(v)
        want = np.concatenate([full.points, np.array(extra, complex)])
        assert_multiset_close(rts.points, want)


class TestRootsMeasure:
    def test_four_point_disk(self):
        cfg = config(
            N=1, mode="roots", roots_b=2, n_second=2, support_radius=5.0,
            enumeration="brute",
        )
        cloud = build_roots_measure(cfg)
        assert cloud.count == 48  # 12 ordered pairs x 4 root combinations
        e = cmath.exp(1j * math.pi / 4.0)
        for target in (e - 1.0, e + 1.0, -e - 1.0, -e + 1.0):
            assert np.min(np.abs(cloud.points - target)) < 1e-14

    def test_support_restriction(self):
        cfg = config(
            N=1, mode="roots", roots_b=2, n_second=2, support_radius=0.5,
            enumeration="brute",
        )
        cloud = build_roots_measure(cfg)
        assert cloud.count < 48
        assert np.all(np.abs(cloud.points) <= 0.5)

    def test_matches_oracle(self):
        cfg = config(
            N=4, mode="roots", roots_b=3, alpha=1.0 / 3.0, n_second=3,
            scaling=ScalingRegime.power_law(2.0 / 3.0), support_radius=2.0,
        )
        cloud = build_roots_measure(cfg)
        want = oracle_roots_values(SQUARE, 1.0 / 3.0, 3, 4, cfg.phi(), 2.0)
        assert_multiset_close(cloud.points, want)

    def test_weight_convention(self):
        cfg = config(N=9, mode="roots", roots_b=2, n_second=2)
        cloud = build_roots_measure(cfg)
        gamma = 0.5
        assert cloud.weight == pytest.approx(
            0.5 / 9 ** (2.0 * (2.0 - 0.5 - gamma)), rel=1e-14
        )
        assert cloud.weight == pytest.approx(1.0 / (2.0 * cfg.psi()), rel=1e-12)


class TestDecomposition:
    def test_basic_split(self):
        cfg = config(N=1, support_radius=3.0, enumeration="brute")
        plus, minus, diag = decompose_pm(cfg)
        # (n=i, m=1) sits in plus, its swap in minus; +-1 and +-i pairs are
        # antipodal (not a shared ray), so nothing is diagonal at N=1
        assert plus.count == minus.count == 6
        assert diag.count == 0
        target = cmath.exp(1j * math.pi / 4.0) - 1.0
        assert np.min(np.abs(plus.points - target)) < 1e-15

    def test_collinear_pair_is_diagonal(self):
        cfg = config(N=2, support_radius=4.0, enumeration="brute")
        plus, minus, diag = decompose_pm(cfg)
        v = cfg.phi() * (level_power(2 + 0j, 0.5, 0) - level_power(1 + 0j, 0.5, 0))
        assert np.min(np.abs(diag.points - v)) < 1e-15

    def test_mirror_exact(self):
        for grid in (SQUARE, HEXAGONAL, OFFSET_SQUARE):
            cfg = config(grid=grid, N=20, alpha=1.0 / 3.0, n_second=2)
            plus, minus, diag = decompose_pm(cfg)
            assert plus.count == minus.count
            a = sorted_complex(plus.points)
            b = sorted_complex(-minus.points)
            assert np.array_equal(a, b)
            total = build_level_measure(cfg)
            assert plus.count + minus.count + diag.count == total.count


class TestCrossLevelCount:
    def test_frozen_regression_value(self):
        # value fixed by the brute-force double loop before freezing
        cfg = config(N=20, support_radius=2.0, enumeration="brute")
        assert cross_level_count(cfg, 2.0, 0) == 298

    def test_level_independence(self):
        cfg = config(N=20, support_radius=2.0)
        assert cross_level_count(cfg, 2.0, 0) == cross_level_count(cfg, 2.0, 7)

    def test_pruned_equals_brute(self):
        a = cross_level_count(config(N=20, support_radius=2.0), 2.0, 0)
        b = cross_level_count(
            config(N=20, support_radius=2.0, enumeration="brute"), 2.0, 0
        )
        assert a == b == 298

    def test_supercritical_empty(self):
        cfg = config(N=2000, scaling=ScalingRegime.power_law(0.9), support_radius=1.0)
        assert cross_level_count(cfg, 1.0, 0) == 0


class TestPruning:
    def test_radius_values(self):
        c1 = config(N=100, support_radius=1.0, safety=1.0)
        assert prune_radius(c1) == pytest.approx(4.0)
        c2 = config(
            N=80, alpha=1.0 / 3.0, scaling=ScalingRegime.power_law(2.0 / 3.0),
            support_radius=1.5, safety=2.0,
        )
        assert prune_radius(c2) == pytest.approx(36.0)

    def test_supercritical_radius_below_systole(self):
        cfg = config(N=2000, scaling=ScalingRegime.power_law(0.9), support_radius=1.0)
        assert prune_radius(cfg) < 1.0
        assert build_level_measure(cfg).count == 0

    def test_matrix_sample(self):
        # the full 3x3x3x3 matrix runs in the acceptance suite
        for alpha in (1.0 / 3.0, 23.0 / 42.0):
            for grid in (SQUARE, HEXAGONAL):
                kw = dict(
                    alpha=alpha, grid=grid, N=15,
                    scaling=ScalingRegime.power_law(1.0 - alpha), n_second=2,
                )
                cp = build_level_measure(CorrelationConfig(enumeration="pruned", **kw))
                cb = build_level_measure(CorrelationConfig(enumeration="brute", **kw))
                assert cp.count == cb.count
                assert np.array_equal(
                    sorted_complex(cp.points), sorted_complex(cb.points)
                )

    def test_threads_bit_identical(self):
        cfg = config(N=25, alpha=1.0 / 3.0, scaling=ScalingRegime.power_law(2.0 / 3.0))
        a = build_level_measure(cfg, threads=1)
        b = build_level_measure(cfg, threads=4)
        assert np.array_equal(a.points, b.points)

    def test_raw_pairs_only_in_brute(self):
        assert build_level_measure(config(N=5)).total_raw_pairs is None
        brute = build_level_measure(config(N=5, enumeration="brute"))
        p = enumerate_disk(SQUARE, 5.0).size
        assert brute.total_raw_pairs == p * (p - 1)


class TestHistograms:
    def test_empty_cloud(self):
        cloud = WeightedPointCloud(np.empty(0, complex), 1.0)
        h = radial_histogram(cloud, [0.0, 0.5, 1.0])
        assert np.all(h.mass == 0.0) and np.all(h.density == 0.0)

    def test_single_point(self):
        cloud = WeightedPointCloud(np.array([0.7j]), 0.25)
        h = radial_histogram(cloud, [0.0, 0.5, 1.0])
        assert h.mass.tolist() == [0.0, 0.25]
        assert h.density[1] == pytest.approx(0.25 / (math.pi * 0.75))

    def test_half_open_bins(self):
        cloud = WeightedPointCloud(np.array([0.5 + 0j, 0j + 1.0, 0.0 + 0.0j + 0.25]), 1.0)
        h = radial_histogram(cloud, [0.25, 0.5, 1.0])
        # 0.25 falls in the closed innermost edge, 0.5 in bin 0, 1.0 in bin 1
        assert h.mass.tolist() == [2.0, 1.0]

    def test_monotone_edges_required(self):
        cloud = WeightedPointCloud(np.array([0.5 + 0j]), 1.0)
        with pytest.raises(ValueError):
            radial_histogram(cloud, [0.0, 0.5, 0.5])

    def test_mass_conservation(self):
        cloud = build_level_measure(config(N=10, n_second=2))
        h = radial_histogram(cloud, np.linspace(0.0, 1.5, 61))
        assert float(h.mass.sum()) == pytest.approx(cloud.total_mass, rel=1e-12)

    def test_planar_masses(self):
        cloud = WeightedPointCloud(np.array([0.9 + 0.9j, -0.9 - 0.9j, 0.1 + 0.0j]), 2.0)
        h = planar_histogram(cloud, 1.0, 2)
        assert h.mass.sum() == pytest.approx(6.0)
        assert h.mass[1, 1] == pytest.approx(4.0)  # 0.9+0.9j and 0.1 share a cell
        assert h.mass[0, 0] == pytest.approx(2.0)
        assert h.density[0, 0] == pytest.approx(2.0)  # cell area 1

    def test_planar_boundary_clamp(self):
        cloud = WeightedPointCloud(np.array([1.0 + 1.0j, -1.0 - 1.0j]), 1.0)
        h = planar_histogram(cloud, 1.0, 4)
        assert h.mass.sum() == pytest.approx(2.0)


class TestEvaluate:
    def test_zero_function(self):
        cloud = build_level_measure(config(N=5))
        assert evaluate(cloud, lambda z: np.zeros_like(np.real(z))) == 0.0

    def test_single_point(self):
        cloud = WeightedPointCloud(np.array([0.3 + 0.4j]), 0.5)
        f = bump(1.5)
        assert evaluate(cloud, f) == pytest.approx(0.5 * float(f(0.3 + 0.4j)))

    def test_scalar_fallback(self):
        cloud = WeightedPointCloud(np.array([0.1 + 0j, 0.2 + 0j]), 1.0)
        got = evaluate(cloud, lambda z: float(abs(complex(z))))
        assert got == pytest.approx(0.1 + 0.2)

    def test_bump_properties(self):
        f = bump(1.5)
        assert float(f(0j)) == 1.0
        assert float(f(1.5 + 0j)) == 0.0
        assert float(f(2.0 + 0j)) == 0.0
