"""
Semi-analytical surrogate of the indentation-and-twist experiment.

The tissue under the spherical indenter is idealised as a compressed column
(normal force) and as an engaged disc twisted about the indentation axis
(torque). Both reuse the homogeneous incompressible responses of
:mod:`dualchar.constitutive`, so the forward model is cheap enough to sweep
hundreds of parameter sets.

Lengths in mm, forces in N, torques in N*mm, angles in degrees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constitutive import MaterialModel, shear_response, uniaxial_response
from .curves import Curve
from .exceptions import CrushError, ParameterError

__all__ = [
    "SpecimenGeometry",
    "MotionProfile",
    "SimCurves",
    "contact_radius",
    "indentation_force",
    "torsion_integral",
    "twist_torque",
    "simulate",
    "simpson",
]

DEFAULT_SIMPSON_INTERVALS = 64

CONTACT_MODES = ("chord", "clamped")


@dataclass(frozen=True)
class SpecimenGeometry:
    """Indenter size and effective tissue height over bone at one spot.

    ``contact`` selects how the engaged radius behaves past the sphere's
    equator: ``"chord"`` follows the sphere/surface-plane intersection,
    ``"clamped"`` holds it at the sphere radius.
    """

    indenter_diameter: float = 15.0
    gauge_height: float = 20.0
    contact: str = "chord"

    def __post_init__(self):
        if self.contact not in CONTACT_MODES:
            raise ParameterError(f"contact must be one of {CONTACT_MODES}, got {self.contact!r}")
        if not self.indenter_diameter > 0:
            raise ParameterError("indenter diameter must be positive")
        if not self.gauge_height > 0:
            raise ParameterError("gauge height must be positive")


@dataclass(frozen=True)
class MotionProfile:
    """Cosine indentation to ``depth_max`` followed by a linear twist sweep."""

    depth_max: float = 10.0
    depth_samples: int = 200
    twist_start: float = 22.5
    twist_end: float = -22.5
    twist_samples: int = 181

    def __post_init__(self):
        if not self.depth_max > 0:
            raise ParameterError("depth_max must be positive")
        if self.depth_samples < 2 or self.twist_samples < 2:
            raise ParameterError("profiles need at least 2 samples per phase")
        if self.twist_start == self.twist_end:
            raise ParameterError("twist sweep has zero range")

    def check_geometry(self, geom: SpecimenGeometry):
        if not self.depth_max < geom.gauge_height:
            raise ParameterError(
                f"depth_max {self.depth_max} mm must stay below gauge height "
                f"{geom.gauge_height} mm"
            )

    def depths(self) -> np.ndarray:
        t = np.linspace(0.0, 1.0, self.depth_samples)
        d = self.depth_max * (1.0 - np.cos(np.pi * t)) / 2.0
        # pin the endpoints against cos rounding
        d[0], d[-1] = 0.0, self.depth_max
        return d

    def angles(self) -> np.ndarray:
        return np.linspace(self.twist_start, self.twist_end, self.twist_samples)


@dataclass(frozen=True)
class SimCurves:
    force_curve: Curve
    torque_curve: Curve


def contact_radius(depth, diameter: float, clamp: bool = False):
    """Engaged radius of a sphere pressed ``depth`` into a flat surface.

    ``a = sqrt(d (D - d))``, the radius where the sphere crosses the
    undeformed surface plane. Past the equator (``d > D/2``) that chord
    shrinks again unless ``clamp`` holds it at ``D/2``. Depths beyond the full
    diameter are rejected.
    """
    d = np.asarray(depth, dtype=float)
    if np.any(d < 0):
        raise ParameterError(f"indentation depth must be non-negative, got {depth}")
    if np.any(d > diameter):
        raise ParameterError(f"depth {depth} exceeds the indenter diameter {diameter}")
    r = diameter / 2.0
    a = np.sqrt(d * (diameter - d))
    if clamp:
        a = np.where(d > r, r, a)
    return float(a) if a.ndim == 0 else a


def _check_depth(depth, geom):
    d = np.asarray(depth, dtype=float)
    if np.any(d >= geom.gauge_height):
        raise CrushError(
            f"depth {np.max(d)} mm crushes the {geom.gauge_height} mm tissue column"
        )
    return d


def indentation_force(model: MaterialModel, geom: SpecimenGeometry, depth):
    """Normal force (N) of the compressed-column approximation.

    The column under the indenter is stretched to ``1 - d/h``; its axial
    stress magnitude acts over the contact disc.
    """
    d = _check_depth(depth, geom)
    a = contact_radius(d, geom.indenter_diameter, geom.contact == "clamped")
    lam = 1.0 - d / geom.gauge_height
    force = np.abs(uniaxial_response(model, lam)) * np.pi * np.asarray(a) ** 2
    return float(force) if np.ndim(force) == 0 else force


def simpson(y, x) -> float:
    """Composite Simpson rule on an odd number of equally spaced samples."""
    y = np.asarray(y, dtype=float)
    n = y.size - 1
    if n < 2 or n % 2:
        raise ValueError("Simpson's rule needs an even number of intervals")
    h = (x[-1] - x[0]) / n
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def torsion_integral(model: MaterialModel, radius: float, height: float, angle_rad: float,
                     intervals: int = DEFAULT_SIMPSON_INTERVALS) -> float:
    """Torque of a disc of ``radius`` and ``height`` twisted by ``angle_rad``.

    T = int_0^a 2 pi r^2 tau(r theta / h) dr, by composite Simpson.
    """
    if intervals < 2 or intervals % 2:
        raise ValueError("intervals must be a positive even number")
    if radius == 0.0 or angle_rad == 0.0:
        return 0.0
    r = np.linspace(0.0, radius, intervals + 1)
    tau = shear_response(model, r * angle_rad / height)
    return simpson(2.0 * np.pi * r * r * tau, r)


def twist_torque(model: MaterialModel, geom: SpecimenGeometry, depth: float, angle,
                 intervals: int = DEFAULT_SIMPSON_INTERVALS):
    """Torque (N*mm) when twisting the engaged disc at ``depth`` by ``angle`` degrees.

    The twisted column spans the tissue left under the indenter,
    ``gauge_height - depth``. Accepts a scalar or array of angles.
    """
    d = float(_check_depth(depth, geom))
    a = contact_radius(d, geom.indenter_diameter, geom.contact == "clamped")
    h = geom.gauge_height - d
    theta = np.radians(np.asarray(angle, dtype=float))
    if theta.ndim == 0:
        return _signed_torque(model, a, h, float(theta), intervals)
    return np.array([_signed_torque(model, a, h, t, intervals) for t in theta])


def _signed_torque(model, a, h, theta, intervals):
    # evaluate on |theta| so the sweep is exactly odd
    return float(np.sign(theta)) * torsion_integral(model, a, h, abs(theta), intervals)


def simulate(model: MaterialModel, geom: SpecimenGeometry, profile: MotionProfile) -> SimCurves:
    """Force-displacement and torque-rotation curves for the two-phase protocol."""
    profile.check_geometry(geom)
    depths = profile.depths()
    forces = indentation_force(model, geom, depths)
    angles = profile.angles()
    torques = twist_torque(model, geom, profile.depth_max, angles)
    return SimCurves(Curve(depths, forces), Curve(angles, torques))
