import numpy as np
import pytest

from acctime import asymptotics as A
from acctime import spectral
from acctime.asymptotics import build_interaction_matrix
from acctime.greens import g0_value
from acctime.errors import EvaluationInsideHole, NoRootBracketed, UnsupportedHoleCount
from acctime.scene import make_scene

from frozen_values import CENTER_LAMBDA, CENTER_T0_LOADED, PAIR_LAMBDA


def center(nu, **kw):
    return make_scene([(0.0, 0.0)], 1.0, nu=nu, **kw)


class TestPrincipalEigenvalue:
    def test_centre_hole_root(self):
        est = spectral.principal_eigenvalue(center(0.1))
        assert est.lambda_root == pytest.approx(CENTER_LAMBDA, abs=1e-12)
        assert est.lambda_root == pytest.approx(0.216216, abs=1e-4)
        assert est.tau == pytest.approx(4.625, rel=1e-12)
        assert est.n_holes == 1

    def test_centre_hole_two_term(self):
        assert spectral.principal_eigenvalue(center(0.1)).lambda_two_term == pytest.approx(0.215, abs=1e-6)

    def test_two_term_gap_shrinks_about_eightfold(self):
        gaps = []
        for nu in (0.1, 0.05):
            est = spectral.principal_eigenvalue(center(nu))
            gaps.append(abs(est.lambda_root - est.lambda_two_term))
        assert gaps[0] <= 5e-3
        assert gaps[0] / gaps[1] == pytest.approx(8.0, rel=0.1)

    def test_identical_pair_root(self):
        sc = make_scene([(0.2, 0.0), (-0.2, 0.0)], 1.0, nu=0.1)
        est = spectral.principal_eigenvalue(sc)
        assert est.lambda_root == pytest.approx(PAIR_LAMBDA, rel=1e-10)
        assert est.lambda_two_term == pytest.approx(0.4, rel=1e-14)
        assert est.n_holes == 2

    @pytest.mark.parametrize("centers", [[(0.0, 0.0)], [(0.3, 0.2), (-0.4, -0.1), (0.1, -0.6)]])
    def test_determinant_vanishes_at_root(self, centers):
        sc = make_scene(centers, 1.0, nu=0.1)
        est = spectral.principal_eigenvalue(sc)
        det = spectral._det_function(sc, build_interaction_matrix(sc, 0.0).entries)
        lam = est.lambda_root
        scale = abs(det(1.01 * lam) - det(0.99 * lam))
        assert abs(det(lam)) <= 1e-10 * scale

    def test_relaxation_time_diverges_as_nu_shrinks(self):
        taus = [spectral.principal_eigenvalue(center(nu)).tau for nu in (0.1, 0.05, 0.02)]
        assert taus[0] < taus[1] < taus[2]

    def test_blind_to_initial_data_and_hole_values(self):
        cs = [(0.3, 0.0), (-0.3, 0.1)]
        base = spectral.principal_eigenvalue(make_scene(cs, [1.0, 1.0], nu=0.1))
        other = spectral.principal_eigenvalue(
            make_scene(cs, [2.0, 1.5], nu=0.1, gamma0=1.0, x0=(0.0, -0.5))
        )
        assert base == other

    def test_no_root_in_tiny_bracket(self):
        with pytest.raises(NoRootBracketed):
            spectral.principal_eigenvalue(center(0.1), lambda_hi=1e-3)


class TestTruncatedTime:
    def test_loaded_centre_hole_value(self):
        sc = center(0.1, gamma0=1.0, x0=(0.5, 0.0))
        assert spectral.truncated_acc_time(sc, (-0.5, 0.0)) == pytest.approx(CENTER_T0_LOADED, rel=1e-12)

    def test_equals_order_one_without_initial_mass(self, offset_scene):
        sc = offset_scene.replace(gamma0=0.0)
        x = np.array([[0.5, -0.2], [-0.6, 0.1], [0.0, 0.9]])
        assert np.array_equal(spectral.truncated_acc_time(sc, x), A.acc_time_order1(sc, x))

    def test_difference_is_source_green_function(self, offset_scene):
        x = np.array([[-0.5, 0.3], [0.2, -0.7]])
        diff = A.acc_time_order1(offset_scene, x) - spectral.truncated_acc_time(offset_scene, x)
        phi = offset_scene.holes[0].phi
        ref = -offset_scene.gamma0 / phi * g0_value(x, np.asarray(offset_scene.x0))
        assert np.allclose(diff, ref, atol=1e-12, rtol=0)

    def test_several_holes_rejected(self, pair_empty):
        with pytest.raises(UnsupportedHoleCount):
            spectral.truncated_acc_time(pair_empty, (0.5, 0.5))

    def test_hole_centre_rejected(self, offset_scene):
        with pytest.raises(EvaluationInsideHole):
            spectral.truncated_acc_time(offset_scene, offset_scene.centers[0])
