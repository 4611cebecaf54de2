"""Problem instance: the unit disc perforated by small Dirichlet holes."""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import (
    DomainError,
    GrowthConditionViolated,
    HoleOutsideDomain,
    HolesOverlapping,
    NonpositiveParameter,
)

DOMAIN_AREA = math.pi


def nu_from_epsilon(eps: float) -> float:
    """Logarithmic gauge ``nu = -1/ln(eps)`` for a hole radius ``eps`` in (0, 1)."""
    if not 0.0 < eps < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {eps!r}")
    return -1.0 / math.log(eps)


def epsilon_from_nu(nu: float) -> float:
    """Inverse of :func:`nu_from_epsilon`."""
    if not 0.0 < nu < 1.0:
        raise DomainError(f"nu must lie in (0, 1), got {nu!r}")
    return math.exp(-1.0 / nu)


@dataclass(frozen=True)
class Hole:
    center: tuple[float, float]
    phi: float
    radius_scale: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "radius_scale", float(self.radius_scale))


@dataclass(frozen=True)
class Scene:
    holes: tuple[Hole, ...]
    D: float = 1.0
    nu: float | None = None
    epsilon: float | None = None
    gamma0: float = 0.0
    x0: tuple[float, float] = (0.5, 0.0)
    allow_overshoot: bool = False
    domain_area: float = field(default=DOMAIN_AREA)

    def __post_init__(self) -> None:
        object.__setattr__(self, "holes", tuple(self.holes))
        object.__setattr__(self, "x0", (float(self.x0[0]), float(self.x0[1])))

    @property
    def n_holes(self) -> int:
        return len(self.holes)

    @property
    def centers(self) -> np.ndarray:
        return np.array([h.center for h in self.holes], dtype=float).reshape(-1, 2)

    @property
    def phis(self) -> np.ndarray:
        return np.array([h.phi for h in self.holes], dtype=float)

    @property
    def phi_bar(self) -> float:
        return float(np.mean(self.phis))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "D": self.D,
            "gamma0": self.gamma0,
            "x0": list(self.x0),
            "holes": [{"center": list(h.center), "phi": h.phi} for h in self.holes],
            "allow_overshoot": self.allow_overshoot,
        }
        if self.nu is not None:
            out["nu"] = self.nu
        if self.epsilon is not None:
            out["epsilon"] = self.epsilon
        return out

    def scene_hash(self) -> str:
        """Short SHA-256 digest of the canonical JSON form."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def replace(self, **changes: Any) -> "Scene":
        return replace(self, **changes)


def _check_positive(name: str, value: float) -> None:
    if not (value > 0.0) or not math.isfinite(value):
        raise NonpositiveParameter(f"{name} must be positive and finite, got {value!r}")


def validate_scene(raw: Scene, separation_min: float | None = None) -> Scene:
    """Check every scene invariant and return a copy with ``nu`` and ``epsilon`` both set.

    ``separation_min`` defaults to ten hole radii. The growth condition
    ``gamma0/|Omega| < min(phi)`` is enforced unless ``raw.allow_overshoot``
    is set, in which case only a warning is emitted.
    """
    _check_positive("D", raw.D)
    if raw.nu is None and raw.epsilon is None:
        raise NonpositiveParameter("one of nu or epsilon must be given")
    if raw.nu is not None and raw.epsilon is not None:
        _check_positive("nu", raw.nu)
        _check_positive("epsilon", raw.epsilon)
        nu = float(raw.nu)
        eps = epsilon_from_nu(nu)
        if not math.isclose(eps, raw.epsilon, rel_tol=1e-12):
            raise DomainError(
                f"nu={raw.nu!r} and epsilon={raw.epsilon!r} are inconsistent; give only one"
            )
    elif raw.nu is not None:
        _check_positive("nu", raw.nu)
        nu = float(raw.nu)
        eps = epsilon_from_nu(nu)
    else:
        _check_positive("epsilon", raw.epsilon)
        eps = float(raw.epsilon)
        nu = nu_from_epsilon(eps)
    if not eps < 1.0:
        raise DomainError(f"epsilon must be < 1, got {eps!r}")

    if raw.gamma0 < 0.0 or not math.isfinite(raw.gamma0):
        raise NonpositiveParameter(f"gamma0 must be nonnegative, got {raw.gamma0!r}")
    if not raw.holes:
        raise DomainError("at least one hole is required")
    for h in raw.holes:
        _check_positive("phi", h.phi)
        if h.radius_scale != 1.0:
            raise DomainError("only unit radius_scale is supported")
        if math.hypot(*h.center) + eps >= 1.0:
            raise HoleOutsideDomain(f"hole at {h.center} with radius {eps:g} leaves the unit disc")
    if math.hypot(*raw.x0) >= 1.0:
        raise DomainError(f"x0={raw.x0} is not inside the unit disc")

    sep = 10.0 * eps if separation_min is None else float(separation_min)
    centers = [h.center for h in raw.holes]
    for i, ci in enumerate(centers):
        if 1.0 - math.hypot(*ci) < sep:
            raise HolesOverlapping(f"hole {i} at {ci} is closer than {sep:g} to the outer boundary")
        if raw.gamma0 > 0.0 and math.dist(ci, raw.x0) < sep:
            raise HolesOverlapping(f"x0={raw.x0} is closer than {sep:g} to hole {i}")
        for j in range(i + 1, len(centers)):
            if math.dist(ci, centers[j]) < sep:
                raise HolesOverlapping(f"holes {i} and {j} are closer than {sep:g}")

    ratio = raw.gamma0 / raw.domain_area
    min_phi = min(h.phi for h in raw.holes)
    if not ratio < min_phi:
        msg = f"gamma0/|Omega| = {ratio:.6g} >= min phi = {min_phi:.6g}"
        if not raw.allow_overshoot:
            raise GrowthConditionViolated(msg)
        warnings.warn(msg + "; the accumulation time may be negative", RuntimeWarning, stacklevel=2)

    return replace(raw, nu=nu, epsilon=eps)


def scene_from_dict(data: dict[str, Any]) -> Scene:
    """Build an unvalidated :class:`Scene` from the JSON scene schema."""
    holes = tuple(
        Hole(center=tuple(h["center"]), phi=h.get("phi", 1.0), radius_scale=h.get("radius_scale", 1.0))
        for h in data.get("holes", [])
    )
    return Scene(
        holes=holes,
        D=float(data.get("D", 1.0)),
        nu=data.get("nu"),
        epsilon=data.get("epsilon"),
        gamma0=float(data.get("gamma0", 0.0)),
        x0=tuple(data.get("x0", (0.5, 0.0))),
        allow_overshoot=bool(data.get("allow_overshoot", False)),
    )


def load_scene(path: str | Path, separation_min: float | None = None) -> Scene:
    """Read and validate a scene file; an optional ``separation_min`` key is honoured."""
    with open(path) as fh:
        data = json.load(fh)
    if separation_min is None:
        separation_min = data.get("separation_min")
    return validate_scene(scene_from_dict(data), separation_min=separation_min)


def make_scene(
    centers: Sequence[Sequence[float]],
    phis: Sequence[float] | float = 1.0,
    **kwargs: Any,
) -> Scene:
    """Convenience constructor returning a validated scene."""
    separation_min = kwargs.pop("separation_min", None)
    if np.isscalar(phis):
        phis = [float(phis)] * len(centers)
    holes = tuple(Hole(center=tuple(c), phi=p) for c, p in zip(centers, phis))
    return validate_scene(Scene(holes=holes, **kwargs), separation_min=separation_min)
