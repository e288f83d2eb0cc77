"""Dual-variable characterisation of hyperelastic soft materials.

Fits Ogden, Yeoh and Neo-Hookean parameters to paired indentation
force-displacement and twist torque-rotation curves by a stability-screened
Latin hypercube sweep scored with normalised mean squared errors.
"""

__version__ = "0.1.0"

from .constitutive import (  # noqa: E402
    NeoHookean,
    Ogden1,
    Yeoh3,
    cauchy_stress,
    pk2_stress,
    shear_response,
    strain_energy,
    uniaxial_response,
)
from .curves import Curve, resample  # noqa: E402
from .fitting import FitScenario, combined_nmse, nmse, select_best  # noqa: E402
from .forward import MotionProfile, SpecimenGeometry, simulate  # noqa: E402
from .sampling import ParameterRegion, latin_hypercube, published_region  # noqa: E402
from .stability import StabilityProbe, drucker_stable, filter_stable  # noqa: E402

__all__ = [
    "Curve", "FitScenario", "MotionProfile", "NeoHookean", "Ogden1", "ParameterRegion",
    "SpecimenGeometry", "StabilityProbe", "Yeoh3", "cauchy_stress", "combined_nmse",
    "drucker_stable", "filter_stable", "latin_hypercube", "nmse", "published_region",
    "pk2_stress", "resample", "select_best", "shear_response", "simulate",
    "strain_energy", "uniaxial_response",
]
