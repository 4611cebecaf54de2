import json
import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acctime.errors import (
    DomainError,
    GrowthConditionViolated,
    HoleOutsideDomain,
    HolesOverlapping,
    NonpositiveParameter,
)
from acctime.scene import (
    Hole,
    Scene,
    epsilon_from_nu,
    load_scene,
    make_scene,
    nu_from_epsilon,
    scene_from_dict,
    validate_scene,
)


def test_nu_from_epsilon_value():
    assert nu_from_epsilon(0.1) == pytest.approx(0.4342944819032518, rel=1e-15)


def test_epsilon_from_nu_value():
    assert epsilon_from_nu(0.1) == pytest.approx(4.539992976248485e-05, rel=1e-14)


@given(st.floats(min_value=1e-12, max_value=0.36, allow_nan=False))
def test_gauge_round_trip(eps):
    assert epsilon_from_nu(nu_from_epsilon(eps)) == pytest.approx(eps, rel=1e-14)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.5, 2.0])
def test_gauge_domain_errors(bad):
    with pytest.raises(DomainError):
        nu_from_epsilon(bad)
    with pytest.raises(DomainError):
        epsilon_from_nu(bad)


def test_reference_scene_is_valid():
    sc = make_scene([(0.0, 0.0)], 1.0, nu=0.1, gamma0=1.0, x0=(0.5, 0.0))
    assert sc.epsilon == pytest.approx(math.exp(-10.0), rel=1e-15)
    assert sc.gamma0 / sc.domain_area < min(sc.phis)


def test_hole_outside_domain():
    with pytest.raises(HoleOutsideDomain):
        make_scene([(0.99, 0.0)], 1.0, epsilon=0.05)


def test_growth_condition_violation():
    with pytest.raises(GrowthConditionViolated):
        make_scene([(0.0, 0.0)], 1.0, nu=0.1, gamma0=4.0)


def test_growth_override_warns():
    with pytest.warns(RuntimeWarning, match="negative"):
        sc = make_scene([(0.0, 0.0)], 1.0, nu=0.1, gamma0=4.0, allow_overshoot=True)
    assert sc.allow_overshoot


def test_holes_overlapping():
    with pytest.raises(HolesOverlapping):
        make_scene([(0.2, 0.0), (0.21, 0.0)], 1.0, epsilon=0.01)


def test_source_too_close_to_hole():
    with pytest.raises(HolesOverlapping):
        make_scene([(0.5, 0.0)], 1.0, epsilon=0.01, gamma0=1.0, x0=(0.55, 0.0))


def test_source_position_ignored_without_mass():
    assert make_scene([(0.5, 0.0)], 1.0, epsilon=0.01, x0=(0.55, 0.0)).x0 == (0.55, 0.0)


def test_separation_min_configurable():
    sc = make_scene([(0.0, 0.0)], 1.0, epsilon=0.1, gamma0=1.0, x0=(0.5, 0.0), separation_min=0.3)
    assert sc.epsilon == 0.1
    with pytest.raises(HolesOverlapping):
        make_scene([(0.0, 0.0)], 1.0, epsilon=0.1, gamma0=1.0, x0=(0.5, 0.0))


@pytest.mark.parametrize(
    "kwargs",
    [dict(nu=0.1, D=0.0), dict(nu=-0.1), dict(epsilon=0.0), dict(nu=0.1, gamma0=-1.0), dict()],
)
def test_nonpositive_parameters(kwargs):
    with pytest.raises(NonpositiveParameter):
        make_scene([(0.0, 0.0)], 1.0, **kwargs)


def test_nonpositive_phi():
    with pytest.raises(NonpositiveParameter):
        make_scene([(0.0, 0.0)], 0.0, nu=0.1)


def test_inconsistent_gauge_rejected():
    with pytest.raises(DomainError):
        validate_scene(Scene(holes=(Hole((0, 0), 1.0),), nu=0.1, epsilon=0.01))


def test_radius_scale_must_be_one():
    with pytest.raises(DomainError):
        validate_scene(Scene(holes=(Hole((0, 0), 1.0, radius_scale=2.0),), nu=0.1))


def test_validation_is_idempotent(offset_scene):
    assert validate_scene(offset_scene) == offset_scene


def test_scene_hash_is_stable_and_sensitive(offset_scene):
    assert offset_scene.scene_hash() == validate_scene(offset_scene).scene_hash()
    assert offset_scene.scene_hash() != offset_scene.replace(gamma0=0.5).scene_hash()


def test_json_round_trip(tmp_path, pair_loaded):
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(pair_loaded.to_dict()))
    assert load_scene(path) == pair_loaded


def test_load_scene_honours_separation_key(tmp_path):
    data = {"epsilon": 0.1, "x0": [0.5, 0.0], "holes": [{"center": [0, 0], "phi": 1}], "separation_min": 0.3}
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(data))
    assert load_scene(path).epsilon == 0.1


def test_scene_from_dict_defaults():
    sc = scene_from_dict({"nu": 0.2, "holes": [{"center": [0.1, 0.1]}]})
    assert sc.holes[0].phi == 1.0 and sc.D == 1.0 and sc.gamma0 == 0.0


@given(
    phi=st.floats(min_value=0.1, max_value=5.0),
    frac=st.floats(min_value=0.0, max_value=0.999),
)
def test_validated_scenes_satisfy_growth(phi, frac):
    gamma0 = frac * math.pi * phi
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sc = make_scene([(0.0, 0.0)], phi, nu=0.1, gamma0=gamma0)
    assert sc.gamma0 / math.pi < min(sc.phis)
