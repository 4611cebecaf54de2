"""Exact accumulation time for a 1D morphogen gradient with constant source flux.

The model is ``u_t = D u_xx - k u`` on ``x > 0`` with influx ``J`` at
``x = 0`` and zero initial data. Everything here is closed form apart
from the two numerical routes to ``T`` (time-domain quadrature of the
fractional deviation and the Laplace-transform derivative), which exist
to cross-check the closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, NonpositiveParameter, QuadratureNotConverged
from .special import erfc, erfcx

Z_CUTOFF = 1e-10
QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-11


@dataclass(frozen=True)
class Morphogen1DParams:
    D: float = 1.0
    k: float = 1.0
    J: float = 1.0
    L: float = math.inf

    def __post_init__(self):
        for name in ("D", "k", "J", "L"):
            if not getattr(self, name) > 0.0:
                raise NonpositiveParameter(f"{name} must be positive")

    @property
    def xi(self) -> float:
        return math.sqrt(self.D / self.k)


def _check_x(x: float) -> float:
    x = float(x)
    if x < 0.0:
        raise DomainError("x must be nonnegative")
    return x


def steady_1d(x: float, p: Morphogen1DParams) -> float:
    """``u*(x) = (J xi / D) exp(-x/xi)``; warns when ``L < 10 xi``."""
    x = _check_x(x)
    if p.L < 10.0 * p.xi:
        warnings.warn(f"L={p.L:g} < 10 xi; the semi-infinite profile is inaccurate", stacklevel=2)
    return p.J * p.xi / p.D * math.exp(-x / p.xi)


def fractional_deviation(x: float, t: float, p: Morphogen1DParams) -> float:
    """``Z = 1 - u/u*``, written with ``erfcx`` so ``exp(2x/xi) erfc(.)`` never overflows."""
    x = _check_x(x)
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    if t == 0.0:
        return 1.0
    sdt = math.sqrt(p.D * t)
    a = sdt / p.xi - x / (2.0 * sdt)
    b = sdt / p.xi + x / (2.0 * sdt)
    return 0.5 * erfc(a) + 0.5 * erfcx(b) * math.exp(-a * a)


def concentration_1d(x: float, t: float, p: Morphogen1DParams) -> float:
    """Time-dependent profile ``u(x, t)``; exactly zero at ``t = 0``."""
    if t == 0.0:
        _check_x(x)
        return 0.0
    return steady_1d(x, p) * (1.0 - fractional_deviation(x, t, p))


def acc_time_1d_exact(x: float, p: Morphogen1DParams) -> float:
    """``T(x) = (1 + x sqrt(k/D)) / (2k)``."""
    x = _check_x(x)
    return (1.0 + x / p.xi) / (2.0 * p.k)


def _z_cutoff_time(x: float, p: Morphogen1DParams) -> float:
    t = max(1.0 / p.k, x * x / p.D)
    while fractional_deviation(x, t, p) >= Z_CUTOFF:
        t *= 2.0
    return t


def acc_time_1d_numeric(x: float, p: Morphogen1DParams) -> float:
    """``T = int_0^inf Z(x, t) dt`` by adaptive quadrature, cut where ``Z < 1e-10``."""
    x = _check_x(x)
    t_max = _z_cutoff_time(x, p)
    breaks = [t for t in (x * x / (2.0 * p.D), x * p.xi / p.D, 1.0 / p.k) if 0.0 < t < t_max]
    val, err, info = _quad(lambda t: fractional_deviation(x, t, p), 0.0, t_max, breaks or None)
    if err > 1e-8 * max(1.0, abs(val)):
        raise QuadratureNotConverged(f"Z quadrature error estimate {err:.3g} at x={x:g}")
    return val


def _quad(f, a: float, b: float, points=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, err, info, *msg = quad(f, a, b, points=points, limit=400, full_output=1,
                                    epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL)
    if msg and msg[0] and "roundoff" not in str(msg[0]):
        raise QuadratureNotConverged(str(msg[0]).splitlines()[0])
    return val, err, info


def laplace_concentration_1d(x: float, s: float, p: Morphogen1DParams) -> float:
    """Closed-form transform ``J exp(-x sqrt((k+s)/D)) / (s sqrt(D (k+s)))``."""
    x = _check_x(x)
    if not s > 0.0:
        raise NonpositiveParameter("s must be positive")
    return p.J * math.exp(-x * math.sqrt((p.k + s) / p.D)) / (s * math.sqrt(p.D * (p.k + s)))


def laplace_concentration_1d_numeric(x: float, s: float, p: Morphogen1DParams) -> float:
    """``int_0^inf exp(-s t) u(x, t) dt`` by quadrature of the closed-form ``u``."""
    x = _check_x(x)
    if not s > 0.0:
        raise NonpositiveParameter("s must be positive")
    ustar = steady_1d(x, p)
    # u* / s in closed form; only the transient part needs integrating
    t_max = _z_cutoff_time(x, p)
    val, _, _ = _quad(lambda t: math.exp(-s * t) * fractional_deviation(x, t, p), 0.0, t_max)
    return ustar / s - ustar * val


def acc_time_1d_laplace(x: float, p: Morphogen1DParams, s_base: float | None = None,
                        transform=laplace_concentration_1d_numeric) -> float:
    """``T = (u* - s u(s)) / (s u*)`` at ``s_base`` and ``s_base/2``, Richardson-combined."""
    x = _check_x(x)
    if s_base is None:
        s_base = 1e-2 * p.k
    ustar = steady_1d(x, p)

    def quotient(s: float) -> float:
        return (ustar - s * transform(x, s, p)) / (s * ustar)

    return 2.0 * quotient(0.5 * s_base) - quotient(s_base)


def truncated_acc_time_1d(x: float, p: Morphogen1DParams) -> float:
    """Single-mode accumulation time ``(xi/(k L)) (1 - exp(-L/xi)) exp(x/xi)`` on ``[0, L]``.

    Keeps only the ``n = 0`` Neumann mode ``phi_0 = 1/sqrt(L)`` with decay
    rate ``k`` and amplitude fixed by zero initial data.
    """
    x = _check_x(x)
    if not math.isfinite(p.L):
        raise DomainError("the single-mode approximation needs a finite length L")
    return p.xi / (p.k * p.L) * (-math.expm1(-p.L / p.xi)) * math.exp(x / p.xi)


def profile_1d(xs, p: Morphogen1DParams) -> dict[str, np.ndarray]:
    """Columns for a 1D line profile: ``x``, ``steady``, ``T``, and ``T0`` when ``L`` is finite."""
    xs = np.asarray(xs, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cols = {
            "x": xs,
            "steady": np.array([steady_1d(x, p) for x in xs]),
            "T": np.array([acc_time_1d_exact(x, p) for x in xs]),
        }
    if math.isfinite(p.L):
        cols["T0"] = np.array([truncated_acc_time_1d(x, p) for x in xs])
    return cols
