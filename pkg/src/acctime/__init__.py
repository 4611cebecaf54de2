"""Accumulation time of diffusion in the unit disc perforated by small absorbing holes."""

__version__ = "0.1.0"

from .scene import Hole, Scene, epsilon_from_nu, make_scene, nu_from_epsilon, validate_scene  # noqa: E402

__all__ = [
    "Hole",
    "Scene",
    "epsilon_from_nu",
    "make_scene",
    "nu_from_epsilon",
    "validate_scene",
    "__version__",
]
