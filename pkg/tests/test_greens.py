import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from acctime.errors import CoincidentPoints, DomainError
from acctime.greens import (
    HelmholtzParams,
    g0,
    g0_value,
    g1,
    g_helmholtz,
    g_helmholtz_value,
    r0_coincident,
    r1_coincident,
    r_helmholtz_coincident,
)

from conftest import disc_points
from frozen_values import (
    G0_BOUNDARY_ORIGIN,
    G0_PAIR,
    G1_PAIR,
    GH_S01,
    GH_S1,
    GH_S10,
    R0_HALF,
    R0_ORIGIN,
    R1_ORIGIN,
    RH_HALF_S1,
)
from quadrature import disc_integral

X, XI = (0.5, 0.0), (0.0, 0.5)


def hp(s, D=1.0):
    return HelmholtzParams.from_s(s, D)


class TestNeumann:
    def test_reference_value(self):
        assert g0(X, XI).value == pytest.approx(G0_PAIR, abs=1e-13)

    def test_source_at_origin_limit(self):
        assert g0((1.0, 0.0), (0.0, 0.0)).value == pytest.approx(G0_BOUNDARY_ORIGIN, abs=1e-14)
        assert G0_BOUNDARY_ORIGIN == pytest.approx(-1 / (8 * math.pi), abs=1e-15)

    def test_source_near_origin_is_continuous(self):
        assert g0_value((0.3, 0.2), (1e-11, 0.0)) == pytest.approx(g0_value((0.3, 0.2), (0.0, 0.0)), abs=1e-9)

    def test_regular_parts(self):
        assert r0_coincident((0.0, 0.0)) == pytest.approx(R0_ORIGIN, abs=1e-15)
        assert r0_coincident((0.5, 0.0)) == pytest.approx(R0_HALF, abs=1e-14)

    def test_diffusivity_scaling(self):
        assert g0_value(X, XI, D=2.5) == pytest.approx(G0_PAIR / 2.5, rel=1e-13)

    def test_symmetry(self):
        a, b = disc_points(10, seed=1), disc_points(10, seed=2)
        assert np.allclose(g0_value(a, b), g0_value(b, a), atol=1e-12, rtol=0)

    def test_split_identity(self):
        ev = g0((0.2, -0.3), (0.1, 0.4))
        d = math.dist((0.2, -0.3), (0.1, 0.4))
        assert ev.value - ev.regular_part == pytest.approx(-math.log(d) / (2 * math.pi), abs=1e-15)
        assert not ev.is_coincident

    def test_regular_part_diverges_at_boundary(self):
        r = [r0_coincident((a, 0.0)) for a in (0.9, 0.99, 0.999)]
        assert r[0] < r[1] < r[2]

    def test_coincident_points_rejected(self):
        with pytest.raises(CoincidentPoints):
            g0(X, X)

    def test_regular_part_domain(self):
        with pytest.raises(DomainError):
            r0_coincident((1.0, 0.0))

    @pytest.mark.parametrize("xi", [(0.0, 0.0), (0.3, 0.2), (-0.6, 0.1)])
    def test_zero_mean(self, xi):
        assert abs(disc_integral(lambda p: g0_value(p, xi), xi)) < 1e-4

    def test_laplacian_is_uniform_sink(self):
        # D lap G0 = 1/|Omega| away from the source
        h = 1e-3
        p = np.array([0.3, -0.2])
        lap = sum(g0_value(p + d, XI) for d in ([h, 0], [-h, 0], [0, h], [0, -h])) - 4 * g0_value(p, XI)
        assert lap / h**2 == pytest.approx(1 / math.pi, rel=1e-5)


class TestHelmholtz:
    @pytest.mark.parametrize(
        "x,x0,s,ref",
        [((0.3, 0.1), (0.5, 0.0), 1.0, GH_S1), ((-0.4, 0.2), (0.0, 0.5), 10.0, GH_S10),
         ((0.1, -0.6), (0.2, 0.3), 0.1, GH_S01)],
    )
    def test_reference_values(self, x, x0, s, ref):
        assert g_helmholtz_value(x, x0, hp(s)) == pytest.approx(ref, rel=1e-11)

    def test_regular_part_reference(self):
        assert r_helmholtz_coincident((0.5, 0.0), hp(1.0)) == pytest.approx(RH_HALF_S1, rel=1e-11)

    @pytest.mark.parametrize("s", [0.1, 1.0, 10.0])
    def test_normalization(self, s):
        x0 = (0.3, 0.2)
        total = disc_integral(lambda p: g_helmholtz_value(p, x0, hp(s)), x0)
        assert total == pytest.approx(1 / s, rel=1e-5)

    def test_no_flux_at_outer_boundary(self):
        x0 = np.array([0.3, 0.2])
        p = hp(1.0)
        th = np.linspace(0, 2 * np.pi, 13)[:-1]
        e = np.stack([np.cos(th), np.sin(th)], axis=-1)
        h = 1e-4
        vals = [g_helmholtz_value((1 - k * h) * e, x0, p) for k in range(3)]
        dr = (3 * vals[0] - 4 * vals[1] + vals[2]) / (2 * h)
        interior = np.abs(g_helmholtz_value(0.5 * e + 1e-3, x0, p) - g_helmholtz_value(0.5 * e, x0, p)) / 1e-3
        assert np.max(np.abs(dr)) <= 1e-6 * np.max(interior)

    def test_symmetry(self):
        a, b = disc_points(8, seed=3), disc_points(8, seed=4)
        p = hp(2.0)
        assert np.allclose(g_helmholtz_value(a, b, p), g_helmholtz_value(b, a, p), atol=1e-10, rtol=0)

    def test_split_identity(self):
        ev = g_helmholtz((0.2, 0.1), (-0.3, 0.4), hp(1.0))
        d = math.dist((0.2, 0.1), (-0.3, 0.4))
        assert ev.value - ev.regular_part == pytest.approx(-math.log(d) / (2 * math.pi), abs=1e-14)

    def test_small_s_limit_is_linear(self):
        diffs = []
        for s in (1e-2, 1e-3, 1e-4):
            diffs.append(g_helmholtz_value(X, XI, hp(s)) - 1 / (s * math.pi) - g0_value(X, XI))
        assert abs(diffs[1]) <= 2e-3
        for a, b in zip(diffs, diffs[1:]):
            assert a / b == pytest.approx(10.0, rel=0.2)

    def test_small_s_limit_of_regular_part(self):
        s = 1e-3
        diff = r_helmholtz_coincident((0.0, 0.0), hp(s)) - 1 / (s * math.pi) - r0_coincident((0.0, 0.0))
        assert abs(diff) <= 2e-3

    def test_regular_part_decreases_in_s(self):
        vals = [r_helmholtz_coincident((0.0, 0.0), hp(s)) for s in np.geomspace(0.1, 10, 9)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_regular_part_rotation_invariant(self):
        p = hp(1.5)
        assert r_helmholtz_coincident((0.4, 0.0), p) == pytest.approx(r_helmholtz_coincident((0.0, 0.4), p), abs=1e-12)

    def test_params_invariant(self):
        p = HelmholtzParams.from_s(3.0, 2.0)
        assert p.omega**2 * 2.0 == pytest.approx(3.0)

    @given(st.floats(min_value=1e-3, max_value=50.0))
    def test_positive(self, s):
        assert g_helmholtz_value((0.1, 0.2), (-0.5, 0.3), hp(s)) > 0


class TestFirstOrderCoefficient:
    def test_reference_value(self):
        assert g1(X, XI) == pytest.approx(G1_PAIR, abs=1e-8)

    def test_diagonal_reference_value(self):
        assert r1_coincident((0.0, 0.0)) == pytest.approx(R1_ORIGIN, abs=1e-8)

    def test_three_term_taylor(self):
        s = 5e-3
        approx = 1 / (s * math.pi) + g0_value(X, XI) + s * g1(X, XI)
        assert approx == pytest.approx(g_helmholtz_value(X, XI, hp(s)), abs=5e-6)

    def test_symmetry(self):
        assert g1(X, (0.1, -0.4)) == pytest.approx(g1((0.1, -0.4), X), abs=1e-8)

    def test_coincident_rejected(self):
        with pytest.raises(CoincidentPoints):
            g1(X, X)
