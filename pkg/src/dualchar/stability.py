"""
Drucker-stability screening along homogeneous deformation paths.

A parameter set is accepted when the work-conjugate stress is non-decreasing
along uniaxial, equibiaxial and simple-shear paths spanning the strains that
the indentation and twist experiment reaches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .constitutive import equibiaxial_response, shear_response, uniaxial_response
from .exceptions import ParameterError
from .sampling import SampleSet

__all__ = ["StabilityProbe", "Violation", "StabilityVerdict", "drucker_stable", "filter_stable",
           "stable_mask"]

PATHS = ("uniaxial", "equibiaxial", "simple_shear")

_RESPONSES = {
    "uniaxial": uniaxial_response,
    "equibiaxial": equibiaxial_response,
    "simple_shear": shear_response,
}


@dataclass(frozen=True)
class StabilityProbe:
    paths: tuple = PATHS
    stretch_range: tuple = (0.4, 1.8)
    shear_range: tuple = (0.0, 1.5)
    steps: int = 60
    tol: float = 1e-9

    def __post_init__(self):
        unknown = set(self.paths) - set(PATHS)
        if unknown:
            raise ParameterError(f"unknown probe paths {sorted(unknown)}")
        lo, hi = self.stretch_range
        if not (0 < lo <= 1.0 <= hi):
            raise ParameterError("stretch range must be positive and contain 1")
        g0, g1 = self.shear_range
        if not (g0 <= 0.0 <= g1 and g1 > g0):
            raise ParameterError("shear range must contain 0")
        if self.steps < 2:
            raise ParameterError("probe needs at least 2 steps")

    def grid(self, path: str) -> np.ndarray:
        lo, hi = self.shear_range if path == "simple_shear" else self.stretch_range
        return np.linspace(lo, hi, self.steps + 1)

    def refined(self, factor: int = 2) -> "StabilityProbe":
        return StabilityProbe(self.paths, self.stretch_range, self.shear_range,
                              self.steps * factor, self.tol)


@dataclass(frozen=True)
class Violation:
    path: str
    parameter: float
    increment: float


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    violations: tuple = field(default_factory=tuple)

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    @property
    def violated_paths(self):
        return tuple(v.path for v in self.violations)

    def __bool__(self):
        return self.stable


def drucker_stable(model, probe: StabilityProbe = StabilityProbe()) -> StabilityVerdict:
    """Check incremental stress times incremental strain along every probe path.

    Records the first violating step of each path; the verdict is stable when
    there are none.
    """
    violations = []
    for path in probe.paths:
        grid = probe.grid(path)
        stress = np.asarray(_RESPONSES[path](model, grid))
        # path parameter increases along the grid, so sign(dstrain) = +1
        work = np.diff(stress) * np.sign(np.diff(grid))
        bad = np.flatnonzero(~(work >= -probe.tol))
        if bad.size:
            k = bad[0]
            violations.append(Violation(path, float(grid[k + 1]), float(work[k])))
    return StabilityVerdict(not violations, tuple(violations))


def stable_mask(sets, probe: StabilityProbe = StabilityProbe(), n_jobs: int = 1):
    """Per-member stability flags, in input order."""
    sets = list(sets)
    if len({type(m) for m in sets}) > 1:
        raise ParameterError("stability filtering requires a single model family")
    if n_jobs == 1 or len(sets) < 2:
        return [drucker_stable(m, probe).stable for m in sets]
    return list(Parallel(n_jobs=n_jobs)(delayed(_is_stable)(m, probe) for m in sets))


def filter_stable(sets, probe: StabilityProbe = StabilityProbe(), n_jobs: int = 1):
    """Order-preserving subset of ``sets`` that passes :func:`drucker_stable`.

    A :class:`~dualchar.sampling.SampleSet` comes back as a SampleSet, anything
    else as a list.
    """
    flags = stable_mask(sets, probe, n_jobs)
    kept = [i for i, ok in enumerate(flags) if ok]
    if isinstance(sets, SampleSet):
        return sets.subset(kept)
    sets = list(sets)
    return [sets[i] for i in kept]


def _is_stable(model, probe):
    return drucker_stable(model, probe).stable
