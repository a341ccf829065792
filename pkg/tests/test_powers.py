"""Branch-cut powers by winding level, roots, and the sector geometry."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gridpairs import (
    LevelPowerParams,
    SectorSpec,
    change_var_h,
    level_power,
    ratio_branch,
    roots,
    sector_classify,
    theta,
)
from gridpairs.powers import TAU, half_memberships

nonzero_complex = st.builds(
    complex,
    st.floats(-10.0, 10.0, allow_nan=False),
    st.floats(-10.0, 10.0, allow_nan=False),
).filter(lambda z: abs(z) > 1e-3)


class TestTheta:
    def test_positive_real(self):
        assert theta(1 + 0j) == 0.0
        assert theta(complex(2.5, 0.0)) == 0.0
        assert theta(complex(3.0, -0.0)) == 0.0

    def test_negative_real(self):
        assert theta(-1 + 0j) == pytest.approx(math.pi)

    def test_lower_half_plane(self):
        assert theta(1 - 1j) == pytest.approx(7.0 * math.pi / 4.0)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            theta(0j)

    @given(z=nonzero_complex)
    def test_range(self, z):
        t = theta(z)
        assert 0.0 <= t < TAU
        w = cmath.rect(abs(z), t)
        assert abs(w - z) <= 1e-12 * abs(z)


class TestLevelPower:
    def test_identity(self):
        assert level_power(1 + 0j, 0.5, 0) == 1 + 0j

    def test_minus_one_level_one(self):
        got = level_power(-1 + 0j, 0.5, 1)
        assert got == pytest.approx(-1j, abs=1e-15)

    def test_lower_half_point(self):
        got = level_power(1 - 1j, 0.5, 0)
        want = 2.0**0.25 * cmath.exp(1j * 7.0 * math.pi / 8.0)
        assert got == pytest.approx(want, abs=1e-14)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            level_power(0j, 0.5, 0)

    def test_params_wrapper(self):
        p = LevelPowerParams(alpha=0.4, level=2)
        assert p.apply(1j) == level_power(1j, 0.4, 2)
        with pytest.raises(ValueError):
            LevelPowerParams(alpha=1.2)

    @given(z=nonzero_complex, beta=st.floats(0.05, 0.95), k=st.integers(-6, 6))
    @settings(max_examples=200)
    def test_level_shift_is_rotation(self, z, beta, k):
        lhs = level_power(z, beta, k)
        rhs = cmath.exp(1j * TAU * beta * k) * level_power(z, beta, 0)
        assert abs(lhs - rhs) <= 1e-13 * abs(rhs)

    @given(z=nonzero_complex, beta=st.floats(0.05, 0.95), k=st.integers(-6, 6))
    @settings(max_examples=200)
    def test_modulus_identity(self, z, beta, k):
        assert abs(level_power(z, beta, k)) == pytest.approx(abs(z) ** beta, rel=1e-13)

    def test_linear_approximation_bound(self):
        # K = 1 frozen after dense sampling (worst observed ratio ~0.13)
        for alpha in (1.0 / 3.0, 0.5, 23.0 / 42.0):
            for r in np.linspace(1e-4, 0.1, 40):
                for a in np.linspace(0.0, math.pi, 81):
                    z = cmath.rect(r, a)
                    err = abs(level_power(1 + z, alpha, 0) - 1.0 - alpha * z)
                    assert err <= r * r

    @given(
        re=st.floats(-0.07, 0.07),
        im=st.floats(0.0, 0.07),
        alpha=st.sampled_from([1.0 / 3.0, 0.5, 23.0 / 42.0]),
    )
    @settings(max_examples=200)
    def test_linear_approximation_random(self, re, im, alpha):
        z = complex(re, im)
        if abs(z) < 1e-6:  # below this the error floor is float rounding
            return
        err = abs(level_power(1 + z, alpha, 0) - 1.0 - alpha * z)
        assert err <= abs(z) ** 2


class TestRatioBranch:
    def test_upper_vs_positive_real(self):
        assert ratio_branch(1j, 1 + 0j) == 0
        got = level_power(1j, 0.5, 0) / level_power(1 + 0j, 0.5, 0)
        assert got == pytest.approx(cmath.exp(1j * math.pi / 4.0))

    def test_positive_real_vs_upper(self):
        assert ratio_branch(1 + 0j, 1j) == -1
        got = level_power(1 + 0j, 0.5, 0) / level_power(1j, 0.5, 0)
        want = level_power(1 / 1j, 0.5, -1)
        assert got == pytest.approx(want)
        assert got == pytest.approx(cmath.exp(-1j * math.pi / 4.0))

    def test_equal_arguments(self):
        assert ratio_branch(-1 + 0j, -1 + 0j) == 0

    @given(
        z=nonzero_complex,
        w=nonzero_complex,
        beta=st.floats(0.05, 0.95),
        k=st.integers(-4, 4),
    )
    @settings(max_examples=300)
    def test_contract(self, z, w, beta, k):
        gap = abs(theta(z) - theta(w))
        # pairs within the 1e-15 cut-clamp sliver are sacrificed by design;
        # exact shared-ray pairs are covered separately below
        assume(gap == 0.0 or 1e-9 < gap < TAU - 1e-9)
        lhs = level_power(z, beta, k) / level_power(w, beta, k)
        rhs = level_power(z / w, beta, ratio_branch(z, w))
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs)

    def test_contract_on_shared_ray(self):
        for t in (0.25, 1.0, 3.0):
            z, w = complex(t, 0.0), complex(2.0 * t, 0.0)
            for k in (-2, 0, 5):
                lhs = level_power(z, 0.4, k) / level_power(w, 0.4, k)
                rhs = level_power(z / w, 0.4, ratio_branch(z, w))
                assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


class TestRoots:
    def test_square_roots_of_four(self):
        assert set(np.round(roots(4 + 0j, 2), 12)) == {2.0 + 0j, -2.0 + 0j}

    def test_square_roots_of_minus_four(self):
        got = roots(-4 + 0j, 2)
        assert got[0] == pytest.approx(2j, abs=1e-14)
        assert got[1] == pytest.approx(-2j, abs=1e-14)

    def test_cube_roots_of_unity(self):
        got = roots(1 + 0j, 3)
        want = [1.0, cmath.exp(2j * math.pi / 3.0), cmath.exp(4j * math.pi / 3.0)]
        for g, w in zip(got, want):
            assert g == pytest.approx(w, abs=1e-14)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            roots(0j, 2)
        with pytest.raises(ValueError):
            roots(1 + 0j, 1)

    @given(m=nonzero_complex, b=st.integers(2, 6))
    @settings(max_examples=200)
    def test_matches_polynomial_solver(self, m, b):
        got = roots(m, b)
        poly = np.zeros(b + 1, dtype=complex)
        poly[0] = 1.0
        poly[-1] = -m
        want = list(np.roots(poly))
        tol = 1e-10 * max(abs(m) ** (1.0 / b), 1.0)
        # nearest-neighbour multiset matching (sorting near-ties is unstable)
        for u in got:
            k = min(range(len(want)), key=lambda i: abs(want[i] - u))
            assert abs(want[k] - u) <= tol
            want.pop(k)
        assert all(abs(u**b - m) <= 1e-12 * abs(m) for u in got)


class TestChangeVar:
    def test_scaled_point(self):
        s = SectorSpec(1 + 0j, 0, 0.5)
        got = change_var_h(s, 0.5 * cmath.exp(-1j * math.pi / 4.0))
        assert got == pytest.approx(4j, abs=1e-13)

    def test_unit_modulus(self):
        s = SectorSpec(1 + 0j, 0, 0.5)
        assert change_var_h(s, cmath.exp(-1j * math.pi / 2.0)) == pytest.approx(
            -1 + 0j, abs=1e-14
        )

    def test_boundary_ray_rejected(self):
        s = SectorSpec(1j, 0, 0.5)
        with pytest.raises(ValueError):
            change_var_h(s, cmath.rect(1.0, math.pi / 2.0))

    def test_outside_sector_rejected(self):
        s = SectorSpec(1 + 0j, 0, 0.5)  # sector arguments (-pi, 0)
        with pytest.raises(ValueError):
            change_var_h(s, cmath.rect(1.0, math.pi / 2.0))

    def test_identity_with_level_powers(self):
        rng = np.random.default_rng(3)
        done = 0
        while done < 500:
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
            assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


class TestSectorClassify:
    def test_inside_excluded_disk(self):
        spec = SectorSpec(1 + 0j, 0, 0.5)
        got = sector_classify(spec, 0.01 * cmath.exp(-1j * math.pi / 4.0), 1e4, 100.0)
        assert got == "outside"

    def test_two_halves(self):
        # oracle: for p=1, k=0, alpha=1/2 the sector spans arguments (-pi, 0);
        # its own change of variables accounts for (-pi, -pi/2), the mirrored
        # antipodal half for (-pi/2, 0)
        spec = SectorSpec(1 + 0j, 0, 0.5)
        n, phi = 1e4, 100.0
        assert sector_classify(spec, cmath.exp(-3j * math.pi / 4.0), n, phi) == "direct"
        assert sector_classify(spec, cmath.exp(-1j * math.pi / 4.0), n, phi) == "mirrored"

    def test_boundary_ray_flagged(self):
        spec = SectorSpec(1 + 0j, 0, 0.5)
        got = sector_classify(spec, cmath.rect(1.0, -math.pi / 2.0), 1e4, 100.0)
        assert got == "boundary"

    def test_montecarlo_exactly_one(self):
        rng = np.random.default_rng(11)
        n_val = 400.0
        boundary = 0
        for _ in range(20_000):
            alpha = rng.uniform(0.1, 0.85)
            p = complex(rng.normal(), rng.normal())
            if abs(p) < 0.2:
                p = complex(0.7, 0.9)
            k = int(rng.integers(-3, 4))
            phi = n_val ** (1.0 - alpha) * rng.uniform(0.5, 2.0)
            spec = SectorSpec(p, k, alpha)
            r_inner = alpha * abs(p) * phi / n_val ** (1.0 - alpha)
            width = (1.0 - alpha) * TAU
            hi = theta(p) - width * k
            w = rng.uniform(hi - width, hi)
            r = rng.uniform(r_inner, 3.0 * r_inner + 1.0)
            z = cmath.rect(r, w)
            direct, mirrored, near = half_memberships(spec, z, n_val, phi)
            if near:
                boundary += 1
                continue
            assert direct != mirrored  # exactly one class
        assert boundary < 20  # 1e-3 fraction

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SectorSpec(0j, 0, 0.5)
        with pytest.raises(ValueError):
            SectorSpec(1 + 0j, 0, 1.5)
