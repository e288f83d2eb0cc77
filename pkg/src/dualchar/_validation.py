"""Input validation helpers for the estimator API."""

import numpy as np
from sklearn.utils import check_array

from .curves import Curve
from .exceptions import CurveError


def check_curve(data, name="curve") -> Curve:
    """Coerce a :class:`Curve` or an ``(n, 2)`` array-like into a Curve."""
    if isinstance(data, Curve):
        return data
    if isinstance(data, tuple) and len(data) == 2 and np.ndim(data[0]) == 1:
        data = np.column_stack([data[0], data[1]])
    arr = check_array(data, dtype=np.float64, ensure_min_samples=2)
    if arr.shape[1] != 2:
        raise CurveError(f"{name} must have 2 columns (abscissa, ordinate), got {arr.shape[1]}")
    return Curve(arr[:, 0], arr[:, 1])


def check_abscissae(x, name="x") -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2 and x.shape[1] == 1:
        x = x[:, 0]
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x
