"""Sampled curves and linear resampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import CurveError, ExtrapolationError

__all__ = ["Curve", "resample"]


@dataclass(frozen=True)
class Curve:
    """Ordered (abscissa, ordinate) samples.

    Abscissae must be strictly monotone, increasing or decreasing. Units are
    carried by convention: mm or deg on the abscissa, N or N*mm on the
    ordinate.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        y = np.array(self.y, dtype=float).reshape(-1)
        if x.shape != y.shape:
            raise CurveError(f"abscissa/ordinate length mismatch: {x.size} vs {y.size}")
        if x.size < 2:
            raise CurveError(f"a curve needs at least 2 points, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise CurveError("non-finite abscissa")
        dx = np.diff(x)
        if not (np.all(dx > 0) or np.all(dx < 0)):
            raise CurveError("abscissae are not strictly monotone")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.x.size

    @property
    def points(self):
        return list(zip(self.x.tolist(), self.y.tolist()))

    def scaled(self, k: float) -> "Curve":
        return Curve(self.x, k * self.y)

    @classmethod
    def _unchecked(cls, x, y) -> "Curve":
        # used for single-point resampling results, which skip the 2-point rule
        obj = object.__new__(cls)
        object.__setattr__(obj, "x", np.asarray(x, dtype=float))
        object.__setattr__(obj, "y", np.asarray(y, dtype=float))
        return obj

    def equals(self, other: "Curve") -> bool:
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)


def resample(curve: Curve, grid) -> Curve:
    """Linearly interpolate ``curve`` onto ``grid``; extrapolation is refused."""
    grid = np.asarray(grid, dtype=float).reshape(-1)
    lo, hi = min(curve.x[0], curve.x[-1]), max(curve.x[0], curve.x[-1])
    outside = grid[(grid < lo) | (grid > hi) | ~np.isfinite(grid)]
    if outside.size:
        raise ExtrapolationError(
            f"grid value {outside[0]!r} lies outside the curve hull [{lo}, {hi}]"
        )
    if curve.x[0] < curve.x[-1]:
        y = np.interp(grid, curve.x, curve.y)
    else:
        y = np.interp(grid, curve.x[::-1], curve.y[::-1])
    if grid.size >= 2:
        return Curve(grid, y)
    return Curve._unchecked(grid, y)
