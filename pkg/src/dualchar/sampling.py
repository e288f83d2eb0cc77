"""Latin hypercube sampling of candidate parameter sets."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .constitutive import MODEL_FAMILIES, MaterialModel, model_from_params
from .exceptions import ParameterError

__all__ = ["ParameterRegion", "SampleSet", "PUBLISHED_REGIONS", "published_region",
           "latin_hypercube", "lhs_unit"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParameterRegion:
    """Box of admissible parameters for one model family.

    ``bounds`` is a tuple of ``(name, low, high)``. Inverted intervals are
    normalised on construction, with a warning.
    """

    model_family: str
    bounds: tuple

    def __post_init__(self):
        if self.model_family not in MODEL_FAMILIES:
            raise ParameterError(f"unknown model family {self.model_family!r}")
        expected = MODEL_FAMILIES[self.model_family].param_names
        names = [b[0] for b in self.bounds]
        if sorted(names) != sorted(expected):
            raise ParameterError(
                f"{self.model_family} region must bound exactly {list(expected)}, got {names}"
            )
        fixed = []
        for name, low, high in self.bounds:
            low, high = float(low), float(high)
            if not (np.isfinite(low) and np.isfinite(high)):
                raise ParameterError(f"bounds for {name} must be finite")
            if low > high:
                logger.warning("inverted bounds for %s: [%g, %g] normalised to [%g, %g]",
                               name, low, high, high, low)
                low, high = high, low
            if not low < high:
                raise ParameterError(f"empty interval for {name}: [{low}, {high}]")
            fixed.append((name, low, high))
        object.__setattr__(self, "bounds", tuple(fixed))

    @classmethod
    def from_mapping(cls, family: str, mapping: dict) -> "ParameterRegion":
        return cls(family, tuple((k, v[0], v[1]) for k, v in mapping.items()))

    @property
    def names(self):
        return [b[0] for b in self.bounds]

    @property
    def lows(self) -> np.ndarray:
        return np.array([b[1] for b in self.bounds])

    @property
    def highs(self) -> np.ndarray:
        return np.array([b[2] for b in self.bounds])

    def contains(self, values) -> bool:
        v = np.asarray(values, dtype=float)
        return bool(np.all(v >= self.lows) and np.all(v <= self.highs))

    def to_model(self, row) -> MaterialModel:
        return model_from_params(self.model_family, dict(zip(self.names, map(float, row))))


# Region values as published; the Yeoh c2 interval is printed inverted and is
# normalised when the region is built.
PUBLISHED_REGIONS = {
    "ogden": (("m1", 1.0, 8.0), ("c1", 3e-2, 2e-1), ("kappa", 2.5e-1, 2.5)),
    "yeoh": (("c1", 1.4e-3, 3e-2), ("c2", -4.14e-5, -3e-3), ("c3", 3e-6, 3e-4)),
    "neohookean": (("e", 1e-3, 1.0), ("nu", 0.40, 0.49)),
}


def published_region(family: str) -> ParameterRegion:
    return ParameterRegion(family, PUBLISHED_REGIONS[family])


@dataclass(frozen=True)
class SampleSet:
    sets: tuple
    seed: int
    region: ParameterRegion
    values: np.ndarray

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, idx):
        return self.sets[idx]

    def subset(self, indices) -> "SampleSet":
        indices = list(indices)
        return SampleSet(tuple(self.sets[i] for i in indices), self.seed, self.region,
                         self.values[indices])


def lhs_unit(n: int, dims: int, rng: np.random.Generator) -> np.ndarray:
    """Plain Latin hypercube on the unit cube, shape ``(n, dims)``.

    Column k places one point uniformly inside each of the n strata, with the
    strata shuffled by an independent permutation.
    """
    u = rng.random((n, dims))
    out = np.empty((n, dims))
    for k in range(dims):
        perm = rng.permutation(n)
        out[:, k] = (perm + u[:, k]) / n
    return out


def latin_hypercube(region: ParameterRegion, n: int, seed: int) -> SampleSet:
    """Draw ``n`` parameter sets from ``region`` by Latin hypercube sampling."""
    if int(n) != n or n < 1:
        raise ParameterError(f"sample count must be a positive integer, got {n}")
    rng = np.random.default_rng(np.uint64(seed % 2**64))
    unit = lhs_unit(int(n), len(region.bounds), rng)
    lows, highs = region.lows, region.highs
    values = lows + unit * (highs - lows)
    # guard the closed box against rounding at the upper edge
    values = np.clip(values, lows, highs)
    sets = tuple(region.to_model(row) for row in values)
    values.setflags(write=False)
    return SampleSet(sets, int(seed), region, values)
