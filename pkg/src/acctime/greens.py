"""Green's functions of the unit disc with a reflecting outer boundary.

``g0`` is the generalized Neumann Green's function of ``D * Laplacian``
(zero mean over the disc); ``g_helmholtz`` solves
``D * Laplacian G - s G = -delta`` with zero normal derivative at ``r = 1``.
Both accept arrays of points of shape ``(..., 2)`` and broadcast the field
point against the source point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import CoincidentPoints, DomainError, NonpositiveParameter, SeriesNotConverged
from .special import N_MAX_DEFAULT, log_bessel_sequences

DISC_AREA = math.pi
COINCIDENT_TOL = 1e-12
ORIGIN_TOL = 1e-10
_BOUNDARY_SLACK = 1e-12


@dataclass
class GreensEval:
    value: np.ndarray | float
    regular_part: np.ndarray | float
    is_coincident: np.ndarray | bool


@dataclass(frozen=True)
class HelmholtzParams:
    s: float
    omega: float
    tol: float = 1e-12
    n_max: int = N_MAX_DEFAULT

    @classmethod
    def from_s(cls, s: float, D: float = 1.0, tol: float = 1e-12, n_max: int = N_MAX_DEFAULT):
        if not s > 0.0:
            raise NonpositiveParameter(f"Laplace variable s must be positive, got {s!r}")
        if not tol > 0.0:
            raise NonpositiveParameter("series tolerance must be positive")
        return cls(s=float(s), omega=math.sqrt(s / D), tol=tol, n_max=int(n_max))


def _as_points(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1:] != (2,):
        raise DomainError(f"points must have trailing dimension 2, got shape {p.shape}")
    if np.any(np.hypot(p[..., 0], p[..., 1]) > 1.0 + _BOUNDARY_SLACK):
        raise DomainError("points must lie in the closed unit disc")
    return p


def _scalarize(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


def _distance(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = x - y
    return np.hypot(d[..., 0], d[..., 1])


def g0_value(x, xi, D: float = 1.0) -> np.ndarray:
    """Value of the Neumann Green's function; no coincidence check."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return (_log_term(x, xi) + _g0_regular_bracket(x, xi)) / (2.0 * math.pi * D)


def _log_term(x, xi):
    with np.errstate(divide="ignore"):
        return -np.log(_distance(x, xi))


def _g0_regular_bracket(x, xi):
    rx2 = x[..., 0] ** 2 + x[..., 1] ** 2
    a = np.hypot(xi[..., 0], xi[..., 1])
    a_safe = np.where(a < ORIGIN_TOL, 1.0, a)
    img = x * a[..., None] - xi / a_safe[..., None]
    with np.errstate(divide="ignore"):
        image = -np.log(np.hypot(img[..., 0], img[..., 1]))
    # xi -> 0: the image point recedes to infinity and the term tends to -ln 1
    image = np.where(a < ORIGIN_TOL, 0.0, image)
    return image + 0.5 * (rx2 + a**2) - 0.75


def g0(x, xi, D: float = 1.0) -> GreensEval:
    """Neumann Green's function ``G0(x, xi)`` and its regular part ``R0``."""
    x = _as_points(x)
    xi = _as_points(xi)
    coincident = _distance(x, xi) < COINCIDENT_TOL
    if np.any(coincident):
        raise CoincidentPoints("g0 called with coincident points; use r0_coincident")
    reg = _g0_regular_bracket(x, xi) / (2.0 * math.pi * D)
    val = reg + _log_term(x, xi) / (2.0 * math.pi * D)
    return GreensEval(_scalarize(val), _scalarize(reg), _scalarize(coincident))


def r0_coincident(xi, D: float = 1.0):
    """Regular part ``R0(xi, xi)`` of the Neumann Green's function."""
    xi = np.asarray(xi, dtype=float)
    a2 = xi[..., 0] ** 2 + xi[..., 1] ** 2
    if np.any(a2 >= 1.0):
        raise DomainError("r0_coincident requires |xi| < 1")
    return _scalarize((-np.log1p(-a2) + a2 - 0.75) / (2.0 * math.pi * D))


def _helmholtz_correction(x: np.ndarray, x0: np.ndarray, params: HelmholtzParams, D: float) -> np.ndarray:
    """Boundary-correction series ``sum_n c_n (-K_n'/I_n')(w) I_n(w r) I_n(w r0) cos(n dtheta)``."""
    x, x0 = np.broadcast_arrays(x, x0)
    shape = x.shape[:-1]
    xf = x.reshape(-1, 2)
    x0f = x0.reshape(-1, 2)
    w = params.omega
    n_max = params.n_max
    r = np.hypot(xf[:, 0], xf[:, 1])
    r0 = np.hypot(x0f[:, 0], x0f[:, 1])
    dtheta = np.arctan2(xf[:, 1], xf[:, 0]) - np.arctan2(x0f[:, 1], x0f[:, 0])

    lw = log_bessel_sequences(n_max, np.array(w))
    lr = log_bessel_sequences(n_max, w * r, with_k=False)
    lr0 = log_bessel_sequences(n_max, w * r0, with_k=False)
    log_ratio = (lw.log_dk - lw.log_di)[:, None]
    n = np.arange(n_max + 1)[:, None]
    weight = np.where(n == 0, 1.0, 2.0)
    with np.errstate(invalid="ignore"):
        terms = weight * np.exp(log_ratio + lr.log_i + lr0.log_i)
    terms = np.nan_to_num(terms, nan=0.0)

    small = terms / (2.0 * math.pi * D) < params.tol
    converged = small.any(axis=0)
    if not np.all(converged):
        raise SeriesNotConverged(
            f"Helmholtz series did not reach tol={params.tol:g} within n_max={n_max} "
            f"(worst r*r0={np.max(r * r0):.4f})"
        )
    first = np.argmax(small, axis=0)
    keep = n <= first[None, :]
    total = np.sum(np.where(keep, terms * np.cos(n * dtheta[None, :]), 0.0), axis=0)
    return total.reshape(shape)


def g_helmholtz_value(x, x0, params: HelmholtzParams, D: float = 1.0) -> np.ndarray:
    """Value of the Neumann modified-Helmholtz Green's function; no coincidence check."""
    x = np.asarray(x, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    d = _distance(x, x0)
    free = _sp.k0(params.omega * d)
    return (free + _helmholtz_correction(x, x0, params, D)) / (2.0 * math.pi * D)


def g_helmholtz(x, x0, params: HelmholtzParams, D: float = 1.0) -> GreensEval:
    """Modified-Helmholtz Green's function ``G(x, s | x0)`` and its regular part ``R``."""
    if not params.s > 0.0:
        raise NonpositiveParameter("g_helmholtz requires s > 0")
    x = _as_points(x)
    x0 = _as_points(x0)
    d = _distance(x, x0)
    coincident = d < COINCIDENT_TOL
    if np.any(coincident):
        raise CoincidentPoints("g_helmholtz called with coincident points; use r_helmholtz_coincident")
    val = g_helmholtz_value(x, x0, params, D)
    reg = val + np.log(d) / (2.0 * math.pi * D)
    return GreensEval(_scalarize(val), _scalarize(reg), _scalarize(coincident))


def r_helmholtz_coincident(x0, params: HelmholtzParams, D: float = 1.0):
    """Regular part ``R(x0, s | x0)``, using ``K_0(z) + ln z -> ln 2 - gamma``."""
    if not params.s > 0.0:
        raise NonpositiveParameter("r_helmholtz_coincident requires s > 0")
    x0 = np.asarray(x0, dtype=float)
    if np.any(np.hypot(x0[..., 0], x0[..., 1]) >= 1.0):
        raise DomainError("r_helmholtz_coincident requires |x0| < 1")
    corr = _helmholtz_correction(x0, x0, params, D)
    bracket = -math.log(params.omega / 2.0) - np.euler_gamma + corr
    return _scalarize(bracket / (2.0 * math.pi * D))


def _richardson_slope(h_of_s, h: float) -> float:
    # f(s) = c + a s + b s^2 + ...; two Richardson levels on s = h, h/2, h/4
    f1, f2, f4 = h_of_s(h), h_of_s(h / 2), h_of_s(h / 4)
    a1 = 2 * f2 - f1
    a2 = 2 * f4 - f2
    return (4 * a2 - a1) / 3


def g1(x, x0, D: float = 1.0, h: float = 1e-2):
    """First-order small-``s`` coefficient ``G1`` in ``G = 1/(s|Omega|) + G0 + s G1 + O(s^2)``.

    Computed as the Richardson-extrapolated ``s -> 0`` limit of
    ``(G - 1/(s|Omega|) - G0) / s`` at ``s = h, h/2, h/4``.
    """
    x = _as_points(x)
    x0 = _as_points(x0)
    if np.any(_distance(x, x0) < COINCIDENT_TOL):
        raise CoincidentPoints("g1 called with coincident points; use r1_coincident")
    base = g0_value(x, x0, D)

    def quotient(s):
        p = HelmholtzParams.from_s(s, D)
        return (g_helmholtz_value(x, x0, p, D) - 1.0 / (s * DISC_AREA) - base) / s

    return _scalarize(_richardson_slope(quotient, h))


def r1_coincident(x0, D: float = 1.0, h: float = 1e-2):
    """Diagonal counterpart of :func:`g1` built from regular parts."""
    base = r0_coincident(x0, D)

    def quotient(s):
        p = HelmholtzParams.from_s(s, D)
        return (r_helmholtz_coincident(x0, p, D) - 1.0 / (s * DISC_AREA) - base) / s

    return _scalarize(_richardson_slope(quotient, h))
