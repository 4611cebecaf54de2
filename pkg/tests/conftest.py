import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from acctime import presets
from acctime.scene import make_scene

settings.register_profile(
    "default", max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def center_scene():
    return presets.center_hole()


@pytest.fixture
def offset_scene():
    return presets.get_scene("single-offset")


@pytest.fixture
def pair_empty():
    return presets.get_scene("pair-empty")


@pytest.fixture
def pair_loaded():
    return presets.get_scene("pair-loaded")


@pytest.fixture
def unequal_pair():
    return make_scene([(0.2, 0.0), (-0.2, 0.0)], [1.0, 2.0], nu=0.1, x0=(0.0, 0.5))


def disc_points(n=12, r_max=0.95, seed=0):
    rng = np.random.default_rng(seed)
    r = r_max * np.sqrt(rng.uniform(0.0, 1.0, n))
    th = rng.uniform(0.0, 2 * math.pi, n)
    return np.stack([r * np.cos(th), r * np.sin(th)], axis=-1)


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
