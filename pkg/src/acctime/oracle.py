"""Finite-difference oracle on a masked Cartesian grid over the perforated disc.

The outer circle is staircased: nodes with ``|x| > 1`` are dropped and
their edges carry no flux. Nodes within a hole radius carry the Dirichlet
value, and by default edges into a hole are shortened to end on the hole
circle. The five-point operator ``-D L + s`` on the free nodes stays
symmetric positive definite and is inverted by the conjugate-residual
form of conjugate gradients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sps

from .errors import CGNotConverged, HoleUnresolved, NonpositiveParameter
from .fieldio import FieldGrid
from .scene import Scene

EXTERIOR, INTERIOR, HOLE, OUTER_BOUNDARY = 0, 1, 2, 3
S_BASE_DEFAULT = 1e-2
CG_RTOL = 1e-12
CG_MAXITER = 100_000

_SHIFTS = ((0, 1), (0, -1), (1, 1), (1, -1))
HOLE_BCS = ("symmetric", "staircase")
THETA_MIN = 1e-3


@dataclass
class MaskedGrid:
    h: float
    coords: np.ndarray  # node coordinates along each axis
    cls: np.ndarray  # (ny, nx) node classes
    hole_index: np.ndarray  # (ny, nx), -1 off holes
    centers: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    epsilon: float = 0.0

    @property
    def free(self) -> np.ndarray:
        return (self.cls == INTERIOR) | (self.cls == OUTER_BOUNDARY)

    @property
    def in_hole(self) -> np.ndarray:
        return self.cls == HOLE

    def points(self) -> np.ndarray:
        xx, yy = np.meshgrid(self.coords, self.coords)
        return np.stack([xx, yy], axis=-1)


@dataclass
class OracleField:
    values: np.ndarray  # (ny, nx); nan off the free and hole nodes
    s: float
    residual_norm: float
    iterations: int = 0
    residual_history: list[float] = field(default_factory=list)


def _shift(a: np.ndarray, axis: int, step: int, fill) -> np.ndarray:
    """``out[i] = a[i + step]`` along ``axis`` with ``fill`` past the edge."""
    out = np.full_like(a, fill)
    src = [slice(None)] * a.ndim
    dst = [slice(None)] * a.ndim
    if step > 0:
        src[axis], dst[axis] = slice(step, None), slice(None, -step)
    else:
        src[axis], dst[axis] = slice(None, step), slice(-step, None)
    out[tuple(dst)] = a[tuple(src)]
    return out


def build_grid(scene: Scene, h: float) -> MaskedGrid:
    """Classify the nodes of a lattice of spacing ``h`` over ``[-1, 1]^2``.

    ``h`` is rounded so that ``2/h`` is an integer and the lattice hits ``+-1``.
    """
    if not h > 0.0:
        raise NonpositiveParameter("grid spacing must be positive")
    m = int(round(2.0 / h))
    h = 2.0 / m
    if h > scene.epsilon / 3.0:
        raise HoleUnresolved(f"h={h:.4g} exceeds epsilon/3={scene.epsilon / 3:.4g}")
    coords = np.linspace(-1.0, 1.0, m + 1)
    xx, yy = np.meshgrid(coords, coords)
    inside = np.hypot(xx, yy) <= 1.0 + 1e-12
    cls = np.where(inside, INTERIOR, EXTERIOR).astype(np.int8)
    hole_index = np.full(cls.shape, -1, dtype=np.int32)
    for j, c in enumerate(scene.centers):
        in_j = inside & (np.hypot(xx - c[0], yy - c[1]) <= scene.epsilon)
        cls[in_j] = HOLE
        hole_index[in_j] = j
    ext = cls == EXTERIOR
    touches_ext = np.zeros_like(ext)
    for axis, step in _SHIFTS:
        touches_ext |= _shift(ext, axis, step, True)
    cls[(cls == INTERIOR) & touches_ext] = OUTER_BOUNDARY
    return MaskedGrid(h, coords, cls, hole_index, scene.centers.copy(), float(scene.epsilon))


class _Operator:
    """Matrix-free ``(-D L + s)`` restricted to free nodes.

    With ``hole_bc="symmetric"`` an edge from a free node into a hole is
    shortened to the distance ``theta h`` at which it crosses the hole
    circle, so the Dirichlet value sits on the circle itself. Only the
    diagonal and the right-hand side change, which keeps the operator
    symmetric. ``"staircase"`` uses ``theta = 1``.
    """

    def __init__(self, grid: MaskedGrid, D: float, s: float, hole_bc: str = "symmetric"):
        if hole_bc not in HOLE_BCS:
            raise ValueError(f"hole_bc must be one of {HOLE_BCS}, got {hole_bc!r}")
        self.grid = grid
        self.free = grid.free
        self.k = D / grid.h**2
        self.nbr_free = [_shift(self.free, ax, st, False) & self.free for ax, st in _SHIFTS]
        self.nbr_hole = [_shift(grid.in_hole, ax, st, False) & self.free for ax, st in _SHIFTS]
        if hole_bc == "symmetric":
            self.hole_weight = [_edge_weights(grid, ax, st, nb) for (ax, st), nb in zip(_SHIFTS, self.nbr_hole)]
        else:
            self.hole_weight = [nb.astype(float) for nb in self.nbr_hole]
        count = sum(nb.astype(float) for nb in self.nbr_free) + sum(self.hole_weight)
        self.diag = np.where(self.free, s + self.k * count, 0.0)

    def apply(self, u: np.ndarray) -> np.ndarray:
        out = self.diag * u
        for (ax, st), nb in zip(_SHIFTS, self.nbr_free):
            out -= self.k * np.where(nb, _shift(u, ax, st, 0.0), 0.0)
        return out

    def boundary_rhs(self, hole_values: np.ndarray) -> np.ndarray:
        """Contribution of known Dirichlet hole values to the right-hand side."""
        vals = np.where(self.grid.in_hole, hole_values, 0.0)
        out = np.zeros_like(vals)
        for (ax, st), wt in zip(_SHIFTS, self.hole_weight):
            out += self.k * wt * _shift(vals, ax, st, 0.0)
        return out


def _edge_weights(grid: MaskedGrid, axis: int, step: int, nb_hole: np.ndarray) -> np.ndarray:
    """``1/theta`` on edges entering a hole, zero elsewhere."""
    pts = grid.points()
    idx = _shift(grid.hole_index, axis, step, -1)
    centers = grid.centers[np.clip(idx, 0, None)]
    e = np.zeros(2)
    e[1 - axis] = step  # axis 1 runs along x, axis 0 along y
    rel = centers - pts
    b = rel @ e
    c = np.sum(rel**2, axis=-1) - grid.epsilon**2
    with np.errstate(invalid="ignore"):
        t = b - np.sqrt(np.maximum(b * b - c, 0.0))
    theta = np.clip(t / grid.h, THETA_MIN, 1.0)
    return np.where(nb_hole, 1.0 / theta, 0.0)


def operator_matrix(grid: MaskedGrid, D: float, s: float, hole_bc: str = "symmetric") -> sps.csr_matrix:
    """Sparse assembly of the same operator, indexed over free nodes in row-major order."""
    op = _Operator(grid, D, s, hole_bc)
    free = grid.free
    idx = np.full(free.shape, -1, dtype=np.int64)
    idx[free] = np.arange(free.sum())
    rows, cols, vals = [idx[free]], [idx[free]], [op.diag[free]]
    for (ax, st), nb in zip(_SHIFTS, op.nbr_free):
        nb_idx = _shift(idx, ax, st, -1)
        sel = nb & free
        rows.append(idx[sel])
        cols.append(nb_idx[sel])
        vals.append(np.full(sel.sum(), -op.k))
    n = int(free.sum())
    return sps.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))


def conjugate_residual(apply, b: np.ndarray, rtol: float = CG_RTOL, maxiter: int = CG_MAXITER, callback=None):
    """Conjugate-residual iteration for a symmetric positive-definite ``apply``.

    The CG variant that minimises ``||r||_2`` over the Krylov space, so the
    residual history is nonincreasing. One operator application per step.
    Returns ``(x, iterations, residual_history)``; stops when
    ``||r|| <= rtol ||b||``. ``callback(x)`` sees every iterate.
    """
    x = np.zeros_like(b)
    bnorm = math.sqrt(float(np.vdot(b, b)))
    history = [bnorm]
    if bnorm == 0.0:
        return x, 0, history
    r = b.copy()
    ar = apply(r)
    p, ap = r.copy(), ar.copy()
    rar = float(np.vdot(r, ar))
    for it in range(1, maxiter + 1):
        alpha = rar / float(np.vdot(ap, ap))
        x += alpha * p
        r -= alpha * ap
        rnorm = math.sqrt(float(np.vdot(r, r)))
        history.append(rnorm)
        if callback is not None:
            callback(x)
        if rnorm <= rtol * bnorm:
            return x, it, history
        ar = apply(r)
        rar_new = float(np.vdot(r, ar))
        beta = rar_new / rar
        rar = rar_new
        p = r + beta * p
        ap = ar + beta * ap
    raise CGNotConverged(f"stalled at relative residual {history[-1] / bnorm:.3e} after {maxiter} iterations")


def _source_node(grid: MaskedGrid, x0) -> tuple[int, int]:
    pts = grid.points()
    d = np.hypot(pts[..., 0] - x0[0], pts[..., 1] - x0[1])
    d = np.where(grid.free, d, np.inf)
    return np.unravel_index(np.argmin(d), d.shape)


def _solve(grid: MaskedGrid, D: float, s: float, rhs: np.ndarray, hole_values: np.ndarray | None,
           rtol: float, maxiter: int, hole_bc: str = "symmetric") -> OracleField:
    op = _Operator(grid, D, s, hole_bc)
    b = np.where(grid.free, rhs, 0.0)
    if hole_values is not None:
        b = b + op.boundary_rhs(hole_values)
    u, its, hist = conjugate_residual(op.apply, b, rtol=rtol, maxiter=maxiter)
    values = np.where(grid.free, u, np.nan)
    if hole_values is not None:
        values = np.where(grid.in_hole, hole_values, values)
    res = float(np.linalg.norm(b - op.apply(u)))
    return OracleField(values, s, res, its, hist)


def _hole_values(grid: MaskedGrid, scene: Scene, scale: float) -> np.ndarray:
    phis = np.append(scene.phis, 0.0)
    return np.where(grid.in_hole, phis[grid.hole_index] * scale, 0.0)


def solve_modified_helmholtz_fd(grid: MaskedGrid, scene: Scene, s: float,
                                rtol: float = CG_RTOL, maxiter: int = CG_MAXITER,
                                hole_bc: str = "symmetric") -> OracleField:
    """Solve ``D L u - s u = -gamma0 delta`` with ``u = phi_j / s`` on hole nodes.

    ``s = 0`` is the steady mode: hole values ``phi_j`` and no source.
    """
    if s < 0.0:
        raise NonpositiveParameter("s must be nonnegative")
    rhs = np.zeros(grid.cls.shape)
    if s == 0.0:
        return _solve(grid, scene.D, 0.0, rhs, _hole_values(grid, scene, 1.0), rtol, maxiter, hole_bc)
    if scene.gamma0 != 0.0:
        rhs[_source_node(grid, scene.x0)] += scene.gamma0 / grid.h**2
    return _solve(grid, scene.D, s, rhs, _hole_values(grid, scene, 1.0 / s), rtol, maxiter, hole_bc)


def _field(grid: MaskedGrid, scene: Scene, values: np.ndarray, name: str, **params) -> FieldGrid:
    from . import __version__

    n = len(grid.coords)
    return FieldGrid(
        n, n, np.where(grid.free, values, np.nan),
        metadata={"field": name, "scene_hash": scene.scene_hash(), "scene": scene.to_dict(),
                  "params": dict(h=grid.h, **params), "version": __version__},
    )


def steady_fd(scene: Scene, h: float, hole_bc: str = "symmetric") -> FieldGrid:
    grid = build_grid(scene, h)
    u = solve_modified_helmholtz_fd(grid, scene, 0.0, hole_bc=hole_bc)
    return _field(grid, scene, u.values, "oracle_steady", hole_bc=hole_bc)


def acc_time_fd(scene: Scene, h: float, s_base: float = S_BASE_DEFAULT,
                rtol: float = CG_RTOL, hole_bc: str = "symmetric") -> FieldGrid:
    """Finite-difference accumulation time ``(u* - s u(s)) / (s u*)``, Richardson-extrapolated in ``s``.

    The quotient is evaluated through ``w = u*/s - u(s)``, which solves
    ``(-D L + s) w = u* - gamma0 delta`` with ``w = 0`` on holes; this is
    the same discrete quantity without the ``1/s`` cancellation.
    ``s_base = 0`` solves the limiting problem directly.
    """
    if s_base < 0.0:
        raise NonpositiveParameter("s_base must be nonnegative")
    grid = build_grid(scene, h)
    ustar = solve_modified_helmholtz_fd(grid, scene, 0.0, rtol=rtol, hole_bc=hole_bc).values
    rhs = np.where(grid.free, ustar, 0.0)
    if scene.gamma0 != 0.0:
        rhs[_source_node(grid, scene.x0)] -= scene.gamma0 / grid.h**2

    def t_at(s: float) -> np.ndarray:
        w = _solve(grid, scene.D, s, rhs, None, rtol, CG_MAXITER, hole_bc).values
        return w / ustar

    if s_base == 0.0:
        t = t_at(0.0)
    else:
        t = 2.0 * t_at(0.5 * s_base) - t_at(s_base)
    return _field(grid, scene, t, "oracle_acc_time", s_base=s_base, hole_bc=hole_bc)
