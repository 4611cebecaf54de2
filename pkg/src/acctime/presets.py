"""Named reference configurations and line-cut definitions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scene import Scene, make_scene

NU_REF = 0.1


def _polar(a: float, theta: float) -> tuple[float, float]:
    return (a * math.cos(theta), a * math.sin(theta))


def single_hole(theta1: float = math.pi / 6, a: float = 0.5, b: float = 0.5,
                gamma0: float = 1.0, nu: float = NU_REF) -> Scene:
    """One hole at ``a (cos theta1, sin theta1)`` with the source at ``(b, 0)``."""
    return make_scene([_polar(a, theta1)], 1.0, nu=nu, gamma0=gamma0, x0=(b, 0.0), D=1.0)


def hole_pair(gamma0: float, a: float = 0.2, b: float = 0.5, nu: float = NU_REF) -> Scene:
    """Identical holes at ``(+-a, 0)`` with the source at ``(0, b)``."""
    return make_scene([(a, 0.0), (-a, 0.0)], 1.0, nu=nu, gamma0=gamma0, x0=(0.0, b), D=1.0)


def center_hole(nu: float = NU_REF, gamma0: float = 0.0) -> Scene:
    return make_scene([(0.0, 0.0)], 1.0, nu=nu, gamma0=gamma0, x0=(0.5, 0.0), D=1.0)


SCENES = {
    "single-offset": lambda: single_hole(),
    "single-offset-angled": lambda: single_hole(theta1=4 * math.pi / 3),
    "single-offset-near-origin": lambda: single_hole(theta1=4 * math.pi / 3, b=0.1),
    "pair-empty": lambda: hole_pair(0.0),
    "pair-loaded": lambda: hole_pair(1.0),
    "center": lambda: center_hole(),
}


@dataclass(frozen=True)
class LineCut:
    """A straight radial cut (``kind="r"``, fixed ``theta``) or a circle (``kind="theta"``, fixed ``r``)."""

    scene: str
    kind: str
    fixed: float
    n: int = 400

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(coordinate, xy)`` along the cut."""
        if self.kind == "r":
            r = np.linspace(0.0, 1.0, self.n)
            return r, np.stack([r * math.cos(self.fixed), r * math.sin(self.fixed)], axis=-1)
        if self.kind == "theta":
            th = np.linspace(0.0, 2.0 * math.pi, self.n)
            return th, np.stack([self.fixed * np.cos(th), self.fixed * np.sin(th)], axis=-1)
        raise ValueError(f"cut kind must be 'r' or 'theta', got {self.kind!r}")


LINE_CUTS = {
    "radial": [LineCut("single-offset", "r", th) for th in (math.pi / 6, math.pi / 12, 0.0)],
    "angular": [LineCut(name, "theta", 0.5) for name in ("single-offset", "single-offset-angled")],
}


def get_scene(name: str) -> Scene:
    try:
        return SCENES[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(SCENES)}") from None
