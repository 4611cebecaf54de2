"""Principal-eigenvalue relaxation estimate and the single-mode accumulation time."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .asymptotics import _check_outer, _out, build_interaction_matrix
from .errors import NoRootBracketed, UnsupportedHoleCount
from .greens import g0_value, r0_coincident
from .scene import Scene

LAMBDA_LO = 1e-6


@dataclass(frozen=True)
class SpectralEstimate:
    lambda_two_term: float
    lambda_root: float
    tau: float
    n_holes: int


def _det_function(scene: Scene, g0_mat: np.ndarray):
    n = scene.n_holes
    coupling = 2.0 * math.pi * scene.nu * scene.D
    ones = np.ones((n, n))
    eye = np.eye(n)

    def det(lam: float) -> float:
        g_trunc = -ones / (lam * scene.domain_area) + g0_mat
        return float(np.linalg.det(eye + coupling * g_trunc))

    return det


def principal_eigenvalue(scene: Scene, lambda_hi: float | None = None, n_scan: int = 400) -> SpectralEstimate:
    """Smallest ``lambda > 0`` with ``det(I + 2 pi nu D G_trunc(-lambda)) = 0``.

    ``G_trunc(-lambda) = -E/(lambda |Omega|) + G0`` keeps the pole and the
    constant term of the small-``s`` expansion. The determinant diverges
    to ``-inf`` just above ``lambda = 0``; the first sign change on a
    geometric scan is refined with Brent's method.
    """
    n = scene.n_holes
    lead = 2.0 * math.pi * scene.nu * scene.D * n / scene.domain_area
    if lambda_hi is None:
        lambda_hi = 10.0 * lead
    g0_mat = build_interaction_matrix(scene, 0.0).entries
    det = _det_function(scene, g0_mat)

    grid = np.geomspace(LAMBDA_LO, lambda_hi, n_scan)
    values = np.array([det(lam) for lam in grid])
    sign_change = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)[0]
    if len(sign_change) == 0:
        raise NoRootBracketed(f"no sign change of the determinant in ({LAMBDA_LO:g}, {lambda_hi:g}]")
    k = sign_change[0]
    lam_root = brentq(det, grid[k], grid[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)

    if n == 1:
        c = scene.centers[0]
        coupling = 2.0 * math.pi * scene.nu * scene.D
        two_term = coupling / scene.domain_area * (1.0 - coupling * r0_coincident(c, scene.D))
    else:
        two_term = lead
    return SpectralEstimate(float(two_term), float(lam_root), 1.0 / float(lam_root), n)


def truncated_acc_time(scene: Scene, x):
    """Leading-eigenmode approximation ``T0(x)`` of the accumulation time (single hole only)."""
    if scene.n_holes != 1:
        raise UnsupportedHoleCount("the truncated accumulation time is derived for one hole only")
    x = np.asarray(x, dtype=float)
    _check_outer(scene, x)
    area, g0_, nu, D = scene.domain_area, scene.gamma0, scene.nu, scene.D
    phi = scene.holes[0].phi
    x1 = scene.centers[0]
    c_big = area * phi - g0_
    src = g0_ / phi * g0_value(x1, np.asarray(scene.x0), D) if g0_ != 0.0 else 0.0
    t0 = (
        c_big / (2.0 * math.pi * nu * D * phi)
        + src
        + c_big / phi * (r0_coincident(x1, D) - g0_value(x, x1, D))
    )
    return _out(t0)
