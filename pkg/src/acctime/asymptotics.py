"""Matched-asymptotic solution in Laplace space and the accumulation time.

Hole ``j`` enters the outer problem as a logarithmic source of strength
``-2 pi nu A_j``; the strengths follow from a dense ``N x N`` matching
system. ``acc_time_order1`` is the explicit ``O(1)`` expansion in
``nu``; ``acc_time_nonperturbative`` differentiates ``s * u(x, s)``
numerically using the fully summed coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EvaluationAtSingularPoint,
    EvaluationInsideHole,
    NonConvergedExtrapolation,
    NonpositiveParameter,
    SingularSystem,
)
from .greens import HelmholtzParams, g0_value, g_helmholtz_value, r0_coincident, r_helmholtz_coincident
from .scene import Scene

SINGULAR_GUARD = 1e-9
COND_LIMIT = 1e12
S_BASE_DEFAULT = 1e-2


@dataclass(frozen=True)
class InteractionMatrix:
    entries: np.ndarray
    s: float


@dataclass(frozen=True)
class SteadyCoeffs:
    a: np.ndarray
    delta_gamma: float
    phi_bar: float


@dataclass(frozen=True)
class LaplaceCoeffs:
    a_s: np.ndarray
    v_rhs: np.ndarray


def build_interaction_matrix(scene: Scene, s: float) -> InteractionMatrix:
    """Green's-function couplings between hole centres; regular parts on the diagonal.

    ``s = 0`` gives the Laplace-limit matrix built from ``G0`` and ``R0``.
    """
    if s < 0.0:
        raise NonpositiveParameter("interaction matrix needs s >= 0")
    c = scene.centers
    n = len(c)
    D = scene.D
    ii, jj = np.triu_indices(n, k=1)
    m = np.zeros((n, n))
    if s == 0.0:
        diag = np.atleast_1d(r0_coincident(c, D))
        off = g0_value(c[ii], c[jj], D) if len(ii) else np.empty(0)
    else:
        p = HelmholtzParams.from_s(s, D)
        diag = np.atleast_1d(r_helmholtz_coincident(c, p, D))
        off = g_helmholtz_value(c[ii], c[jj], p, D) if len(ii) else np.empty(0)
    m[ii, jj] = off
    m[jj, ii] = off
    m[np.arange(n), np.arange(n)] = diag
    return InteractionMatrix(m, float(s))


def _checked_solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystem(f"matching system is numerically singular (cond={cond:.3g}); nu too large?")
    return np.linalg.solve(mat, rhs)


def solve_interaction_coeffs(scene: Scene, s: float) -> LaplaceCoeffs:
    """Strengths ``A_j(nu, s)`` from ``(I + 2 pi nu D G(s)) A = -D V``."""
    if not s > 0.0:
        raise NonpositiveParameter("solve_interaction_coeffs requires s > 0")
    D, nu = scene.D, scene.nu
    gmat = build_interaction_matrix(scene, s).entries
    v = scene.phis / s
    if scene.gamma0 != 0.0:
        p = HelmholtzParams.from_s(s, D)
        v = v - scene.gamma0 * g_helmholtz_value(scene.centers, np.asarray(scene.x0), p, D)
    mat = np.eye(len(v)) + 2.0 * math.pi * nu * D * gmat
    return LaplaceCoeffs(_checked_solve(mat, -D * v), v)


def _points(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _check_outer(scene: Scene, x: np.ndarray, guard_source: bool | None = None) -> None:
    if guard_source is None:
        guard_source = scene.gamma0 != 0.0
    for j, c in enumerate(scene.centers):
        d = np.hypot(x[..., 0] - c[0], x[..., 1] - c[1])
        if np.any(d < scene.epsilon):
            raise EvaluationInsideHole(f"evaluation point inside hole {j}")
        if np.any(d < SINGULAR_GUARD):
            raise EvaluationAtSingularPoint(f"evaluation point at hole centre {j}")
    if guard_source:
        d0 = np.hypot(x[..., 0] - scene.x0[0], x[..., 1] - scene.x0[1])
        if np.any(d0 < SINGULAR_GUARD):
            raise EvaluationAtSingularPoint("evaluation point at the initial position x0")


def _out(v):
    v = np.asarray(v)
    return v.item() if v.ndim == 0 else v


def outer_solution_laplace(scene: Scene, x, s: float, coeffs: LaplaceCoeffs | None = None):
    """Laplace-space concentration ``u(x, s)`` away from the holes."""
    if not s > 0.0:
        raise NonpositiveParameter("outer_solution_laplace requires s > 0")
    x = _points(x)
    _check_outer(scene, x)
    if coeffs is None:
        coeffs = solve_interaction_coeffs(scene, s)
    D = scene.D
    p = HelmholtzParams.from_s(s, D)
    u = np.zeros(x.shape[:-1])
    if scene.gamma0 != 0.0:
        u = u + scene.gamma0 * g_helmholtz_value(x, np.asarray(scene.x0), p, D)
    for a_j, c in zip(coeffs.a_s, scene.centers):
        u = u - 2.0 * math.pi * scene.nu * a_j * g_helmholtz_value(x, c, p, D)
    return _out(u)


def steady_state_coeffs(scene: Scene) -> SteadyCoeffs:
    """Solve the zero-sum steady matching system for ``A_j(nu)`` and ``Delta Gamma``.

    The ``N`` matching rows have rank ``N - 1``; the constraint
    ``sum_j A_j = 0`` is stacked as an extra row and the consistent
    ``(N + 1) x N`` system is solved by least squares.
    """
    nu, D = scene.nu, scene.D
    g = build_interaction_matrix(scene, 0.0).entries
    phi = scene.phis
    n = len(phi)
    phi_bar = float(np.mean(phi))
    # row j: 2 pi nu [(G^T a)_j - mean_k (G^T a)_k] + a_j / D = phi_bar - phi_j
    centred = g.T - g.T.mean(axis=0, keepdims=True)
    rows = 2.0 * math.pi * nu * centred + np.eye(n) / D
    mat = np.vstack([rows, np.ones((1, n))])
    rhs = np.concatenate([phi_bar - phi, [0.0]])
    if n == 1 or np.all(phi == phi[0]):
        a = np.zeros(n)
    else:
        a, _, rank, sv = np.linalg.lstsq(mat, rhs, rcond=None)
        if rank < n or sv[-1] == 0.0 or sv[0] / sv[-1] > COND_LIMIT:
            raise SingularSystem("steady matching system is rank deficient")
        # project out round-off in the constraint
        a = a - a.mean()
    mean_ag = float(a @ g.sum(axis=1)) / n
    delta_gamma = -scene.domain_area * (phi_bar + 2.0 * math.pi * nu * mean_ag)
    return SteadyCoeffs(a, float(delta_gamma), phi_bar)


def steady_state(scene: Scene, x, coeffs: SteadyCoeffs | None = None):
    """Non-perturbative steady concentration ``u*(x)``; independent of ``gamma0`` and ``x0``."""
    x = _points(x)
    _check_outer(scene, x, guard_source=False)
    if coeffs is None:
        coeffs = steady_state_coeffs(scene)
    u = np.full(x.shape[:-1], -coeffs.delta_gamma / scene.domain_area)
    for a_k, c in zip(coeffs.a, scene.centers):
        if a_k != 0.0:
            u = u - 2.0 * math.pi * scene.nu * a_k * g0_value(x, c, scene.D)
    return _out(u)


def _f0_pieces(scene: Scene, x: np.ndarray):
    """Shared ingredients of the ``O(1)`` accumulation-time formula."""
    D = scene.D
    c = scene.centers
    n = scene.n_holes
    g_mat = build_interaction_matrix(scene, 0.0).entries
    g_x_holes = np.stack([g0_value(x, cj, D) for cj in c], axis=-1)
    if scene.gamma0 != 0.0:
        x0 = np.asarray(scene.x0)
        g_x_x0 = g0_value(x, x0, D)
        g_holes_x0 = g0_value(c, x0, D)
    else:
        g_x_x0 = np.zeros(x.shape[:-1])
        g_holes_x0 = np.zeros(n)
    return g_mat, g_x_holes, g_x_x0, g_holes_x0


def acc_time_order1(scene: Scene, x):
    """Accumulation time to ``O(1)`` in the ``nu``-expansion.

    ``T = C/(2 pi nu N D phibar) - F0(x)/phibar + C/(N phibar^2) * B(x)`` with
    ``C = |Omega| phibar - gamma0`` and ``B`` the ``O(nu)`` shape of ``u*``.
    """
    x = _points(x)
    _check_outer(scene, x)
    area, g0_, nu, D = scene.domain_area, scene.gamma0, scene.nu, scene.D
    phi = scene.phis
    n = scene.n_holes
    pb = float(np.mean(phi))
    dphi = pb - phi
    c_big = area * pb - g0_
    g_mat, g_x_holes, g_x_x0, g_holes_x0 = _f0_pieces(scene, x)

    f0 = (
        g0_ * g_x_x0
        - g0_ / n * np.sum(g_holes_x0)
        - area / n**2 * float(dphi @ g_mat.sum(axis=1))
        - c_big / n**2 * float(g_mat.sum())
        + c_big / n * g_x_holes.sum(axis=-1)
    )
    shape_term = g_x_holes @ dphi - float(dphi @ g_mat.sum(axis=1)) / n
    t = c_big / (2.0 * math.pi * nu * n * D * pb) - f0 / pb + c_big / (n * pb**2) * shape_term
    return _out(t)


def acc_time_identical(scene: Scene, x):
    """``O(1)`` accumulation time specialised to identical boundary values ``phi_j``."""
    x = _points(x)
    _check_outer(scene, x)
    area, g0_, nu, D = scene.domain_area, scene.gamma0, scene.nu, scene.D
    n = scene.n_holes
    pb = float(np.mean(scene.phis))
    c_big = area * pb - g0_
    g_mat, g_x_holes, g_x_x0, g_holes_x0 = _f0_pieces(scene, x)
    t = (
        c_big / (2.0 * math.pi * nu * n * D * pb)
        - g0_ / pb * (g_x_x0 - np.mean(g_holes_x0))
        - c_big / (n * pb) * (g_x_holes.sum(axis=-1) - g_mat.sum() / n)
    )
    return _out(t)


def _laplace_f(scene: Scene, x: np.ndarray, s: float) -> np.ndarray:
    return s * np.asarray(outer_solution_laplace(scene, x, s))


def acc_time_nonperturbative(scene: Scene, x, s_base: float = S_BASE_DEFAULT):
    """Accumulation time ``-F'(0)/F(0)`` with ``F = s u(x, s)`` and all ``nu`` orders summed.

    The forward quotient ``(F(0) - F(s)) / (s F(0))`` is taken at
    ``s_base`` and ``s_base/2`` and combined by one Richardson step. The
    leftover error grows roughly like ``s_base**2 * T**3``, so small ``nu``
    (large ``T``) wants a smaller ``s_base`` than the default.
    """
    if not s_base > 0.0:
        raise NonpositiveParameter("s_base must be positive")
    x = _points(x)
    _check_outer(scene, x)
    f_zero = np.asarray(steady_state(scene, x))
    t_full = (f_zero - _laplace_f(scene, x, s_base)) / (s_base * f_zero)
    half = 0.5 * s_base
    t_half = (f_zero - _laplace_f(scene, x, half)) / (half * f_zero)
    if np.any(np.abs(t_half - t_full) > 0.5 * np.abs(t_full)):
        raise NonConvergedExtrapolation(f"s_base={s_base:g} too large for the s-derivative")
    return _out(2.0 * t_half - t_full)
