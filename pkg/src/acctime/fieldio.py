"""Rectangular field samples over the disc and their CSV serialization."""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, TextIO

import numpy as np

from . import __version__
from .errors import AccTimeError, GridMismatch
from .scene import Scene

log = logging.getLogger(__name__)

Evaluator = Callable[[Scene, np.ndarray], np.ndarray]


@dataclass
class FieldGrid:
    nx: int
    ny: int
    values: np.ndarray  # shape (ny, nx); nan marks masked nodes
    x_extent: tuple[float, float] = (-1.0, 1.0)
    y_extent: tuple[float, float] = (-1.0, 1.0)
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_extent[0], self.x_extent[1], self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.y_extent[0], self.y_extent[1], self.ny)

    def points(self) -> np.ndarray:
        xx, yy = np.meshgrid(self.x, self.y)
        return np.stack([xx, yy], axis=-1)

    @property
    def mask(self) -> np.ndarray:
        return np.isnan(self.values)


def evaluators() -> dict[str, Evaluator]:
    from . import asymptotics, spectral

    return {
        "steady_state": asymptotics.steady_state,
        "acc_time_order1": asymptotics.acc_time_order1,
        "acc_time_nonperturbative": asymptotics.acc_time_nonperturbative,
        "truncated_acc_time": spectral.truncated_acc_time,
    }


ORACLE_FIELDS = ("oracle_steady", "oracle_acc_time")


def domain_mask(scene: Scene, pts: np.ndarray, exclusion_radius: float | None = None) -> np.ndarray:
    """True where a node is outside the disc, inside a hole, or within an exclusion radius."""
    if exclusion_radius is None:
        exclusion_radius = 2.0 * scene.epsilon
    r = np.hypot(pts[..., 0], pts[..., 1])
    masked = r > 1.0 + 1e-12
    hole_r = max(scene.epsilon, exclusion_radius)
    for c in scene.centers:
        masked |= np.hypot(pts[..., 0] - c[0], pts[..., 1] - c[1]) <= hole_r
    if scene.gamma0 != 0.0:
        masked |= np.hypot(pts[..., 0] - scene.x0[0], pts[..., 1] - scene.x0[1]) <= exclusion_radius
    return masked


def evaluate_masked(fn: Evaluator, scene: Scene, row_pts: np.ndarray, row_mask: np.ndarray, kwargs) -> tuple[np.ndarray, int]:
    """Evaluate ``fn`` at unmasked points; points that raise become ``nan``. Returns ``(values, failures)``."""
    out = np.full(row_pts.shape[0], np.nan)
    idx = np.nonzero(~row_mask)[0]
    if len(idx) == 0:
        return out, 0
    try:
        out[idx] = fn(scene, row_pts[idx], **kwargs)
        return out, 0
    except AccTimeError:
        failures = 0
        for i in idx:
            try:
                out[i] = fn(scene, row_pts[i], **kwargs)
            except AccTimeError:
                failures += 1
        return out, failures


def sweep(
    scene: Scene,
    field_name: str | Evaluator,
    nx: int = 100,
    ny: int = 100,
    exclusion_radius: float | None = None,
    workers: int = 1,
    extent: tuple[float, float] = (-1.0, 1.0),
    **kwargs: Any,
) -> FieldGrid:
    """Evaluate a named field on an ``nx x ny`` lattice, masking holes, exterior and exclusions.

    Oracle fields (``oracle_steady``, ``oracle_acc_time``) run the
    finite-difference solver on the same lattice and need ``nx == ny``.
    """
    if exclusion_radius is None:
        exclusion_radius = 2.0 * scene.epsilon
    grid = FieldGrid(nx, ny, np.empty((ny, nx)), extent, extent)
    pts = grid.points()
    mask = domain_mask(scene, pts, exclusion_radius)
    name = field_name if isinstance(field_name, str) else getattr(field_name, "__name__", "custom")

    if isinstance(field_name, str) and field_name in ORACLE_FIELDS:
        values = _oracle_sweep(scene, field_name, nx, ny, extent, **kwargs)
        values = np.where(mask, np.nan, values)
        failures = 0
    else:
        fn = evaluators()[field_name] if isinstance(field_name, str) else field_name
        rows = range(ny)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda j: evaluate_masked(fn, scene, pts[j], mask[j], kwargs), rows))
        else:
            results = [evaluate_masked(fn, scene, pts[j], mask[j], kwargs) for j in rows]
        values = np.stack([r[0] for r in results])
        failures = sum(r[1] for r in results)
        if failures:
            log.warning("sweep %s: %d nodes failed to evaluate and were masked", name, failures)

    grid.values = values
    grid.metadata = {
        "field": name,
        "scene_hash": scene.scene_hash(),
        "scene": scene.to_dict(),
        "exclusion_radius": exclusion_radius,
        "failed_nodes": failures,
        "params": {k: v for k, v in kwargs.items()},
        "version": __version__,
    }
    return grid


def _oracle_sweep(scene: Scene, name: str, nx: int, ny: int, extent, **kwargs) -> np.ndarray:
    from . import oracle

    if nx != ny or tuple(extent) != (-1.0, 1.0):
        raise GridMismatch("oracle sweeps need a square lattice over [-1, 1]^2")
    h = 2.0 / (nx - 1)
    if name == "oracle_steady":
        return oracle.steady_fd(scene, h).values
    return oracle.acc_time_fd(scene, h, s_base=kwargs.get("s_base", oracle.S_BASE_DEFAULT)).values


def write_csv_stream(grid: FieldGrid, fh: TextIO) -> None:
    """Write ``# {json}`` then ``x,y,value`` rows in row-major order (``y`` outer)."""
    meta = dict(grid.metadata)
    meta.update(nx=grid.nx, ny=grid.ny, x_extent=list(grid.x_extent), y_extent=list(grid.y_extent))
    xs, ys = grid.x, grid.y
    fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    fh.write("x,y,value\n")
    for j in range(grid.ny):
        for i in range(grid.nx):
            fh.write(f"{float(xs[i])!r},{float(ys[j])!r},{float(grid.values[j, i])!r}\n")


def write_csv(grid: FieldGrid, path: str | Path) -> None:
    with open(path, "w") as fh:
        write_csv_stream(grid, fh)


def read_csv(path: str | Path) -> FieldGrid:
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise GridMismatch(f"{path}: missing metadata header")
        meta = json.loads(first[2:])
        fh.readline()
        vals = [float(line.rsplit(",", 1)[1]) for line in fh if line.strip()]
    nx, ny = int(meta.pop("nx")), int(meta.pop("ny"))
    x_ext = tuple(meta.pop("x_extent"))
    y_ext = tuple(meta.pop("y_extent"))
    if len(vals) != nx * ny:
        raise GridMismatch(f"{path}: expected {nx * ny} rows, found {len(vals)}")
    return FieldGrid(nx, ny, np.array(vals).reshape(ny, nx), x_ext, y_ext, meta)


@dataclass
class ErrorReport:
    rel_linf: float
    rel_l2: float
    max_abs: float
    max_location: tuple[float, float]
    n_points: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "rel_linf": self.rel_linf,
            "rel_l2": self.rel_l2,
            "max_abs": self.max_abs,
            "max_location": list(self.max_location),
            "n_points": self.n_points,
        }


def compare_fields(
    a: FieldGrid,
    b: FieldGrid,
    exclusions: list[tuple[tuple[float, float], float]] = (),
) -> ErrorReport:
    """Relative errors of ``a`` against reference ``b`` over nodes unmasked in both.

    ``rel_linf`` is the largest pointwise ``|a - b| / |b|``; ``rel_l2`` is
    ``||a - b||_2 / ||b||_2``.
    """
    if (a.nx, a.ny, tuple(a.x_extent), tuple(a.y_extent)) != (b.nx, b.ny, tuple(b.x_extent), tuple(b.y_extent)):
        raise GridMismatch("fields are sampled on different lattices")
    pts = a.points()
    keep = ~(a.mask | b.mask)
    for centre, radius in exclusions:
        keep &= np.hypot(pts[..., 0] - centre[0], pts[..., 1] - centre[1]) > radius
    if not keep.any():
        raise GridMismatch("no nodes left to compare")
    diff = np.abs(a.values - b.values)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(keep, diff / np.abs(b.values), -np.inf)
    k = np.unravel_index(np.argmax(rel), rel.shape)
    return ErrorReport(
        rel_linf=float(rel[k]),
        rel_l2=float(math.sqrt(np.sum(diff[keep] ** 2) / np.sum(b.values[keep] ** 2))),
        max_abs=float(diff[keep].max()),
        max_location=(float(pts[k][0]), float(pts[k][1])),
        n_points=int(keep.sum()),
    )
