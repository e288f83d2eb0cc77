"""
NMSE objectives, scenario selection and cross-spot generalisation.

A sweep scores every candidate parameter set against the measured force and
torque curves. The three scenarios then pick a winner by the summed error
(dual-variable fit), by the torque error alone or by the force error alone.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .constitutive import MaterialModel
from .curves import Curve, resample
from .exceptions import DegenerateNormalizationError, DualCharError, ParameterError
from .forward import MotionProfile, SimCurves, SpecimenGeometry, simulate

__all__ = [
    "FitScenario",
    "FitResult",
    "GeneralizationResult",
    "DEFAULT_ZERO_MEAN_TOL",
    "nmse",
    "combined_nmse",
    "evaluate_sweep",
    "select_best",
    "select_all",
    "generalize",
]

logger = logging.getLogger(__name__)

# |mean| below this fraction of max|y| switches the NMSE denominator to the
# mean magnitude; a symmetric twist sweep has a mean at the noise level
DEFAULT_ZERO_MEAN_TOL = 0.1


class FitScenario(enum.Enum):
    SUM_BOTH = "I"
    TORQUE_ONLY = "II"
    FORCE_ONLY = "III"

    @property
    def key(self) -> str:
        return {"I": "nmse_sum", "II": "nmse_torque", "III": "nmse_force"}[self.value]

    @classmethod
    def parse(cls, value) -> "FitScenario":
        if isinstance(value, cls):
            return value
        text = str(value).strip()
        for s in cls:
            if text.upper() == s.value or text.lower() in (s.name.lower(), s.key):
                return s
        aliases = {"sum": cls.SUM_BOTH, "both": cls.SUM_BOTH, "torque": cls.TORQUE_ONLY,
                   "force": cls.FORCE_ONLY}
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ParameterError(f"unknown fit scenario {value!r}") from None


@dataclass(frozen=True)
class FitResult:
    params: MaterialModel
    nmse_force: float
    nmse_torque: float
    set_index: int
    status: str = "ok"
    note: str = ""
    nmse_sum: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "nmse_sum", self.nmse_force + self.nmse_torque)

    @classmethod
    def failed(cls, params, set_index, note) -> "FitResult":
        return cls(params, math.inf, math.inf, set_index, status="failed", note=note)

    def score(self, scenario: FitScenario) -> float:
        return getattr(self, scenario.key)


@dataclass(frozen=True)
class GeneralizationResult:
    params: MaterialModel
    set_index: int
    mean_nmse: float
    std_nmse: float
    per_point_nmse: tuple


def _ordinates(c):
    return np.asarray(c.y if isinstance(c, Curve) else c, dtype=float).reshape(-1)


def nmse(sim, exp, zero_mean_tol=None) -> float:
    """Normalised mean squared error of ``sim`` against ``exp``.

    ``mean((sim - exp)**2) / mean(exp)**2``. Both inputs must share the
    experimental abscissae. With ``zero_mean_tol`` set, an experimental mean
    smaller than ``zero_mean_tol * max|exp|`` is replaced by the mean of
    ``|exp|``; without it a zero mean is an error.
    """
    if isinstance(sim, Curve) and isinstance(exp, Curve):
        if sim.x.shape != exp.x.shape or not np.allclose(sim.x, exp.x, rtol=1e-12, atol=1e-12):
            raise ParameterError("nmse needs sim resampled onto the experimental abscissae")
    s, e = _ordinates(sim), _ordinates(exp)
    if s.shape != e.shape:
        raise ParameterError(f"point count mismatch: {s.size} simulated vs {e.size} measured")
    scale = abs(e.mean())
    if zero_mean_tol is not None and scale <= zero_mean_tol * np.max(np.abs(e)):
        scale = np.mean(np.abs(e))
        logger.debug("near-zero experimental mean; normalising by mean magnitude %g", scale)
    if scale == 0.0:
        raise DegenerateNormalizationError("experimental mean is zero")
    return float(np.mean((s - e) ** 2) / scale**2)


def combined_nmse(sim: SimCurves, exp_force: Curve, exp_torque: Curve,
                  zero_mean_tol=DEFAULT_ZERO_MEAN_TOL):
    """Force NMSE, torque NMSE and their sum.

    Simulated curves are resampled onto the experimental abscissae first.
    """
    f_sim = resample(sim.force_curve, exp_force.x)
    t_sim = resample(sim.torque_curve, exp_torque.x)
    nf = nmse(f_sim, exp_force, zero_mean_tol)
    nt = nmse(t_sim, exp_torque, zero_mean_tol)
    return nf, nt, nf + nt


def _hull(x):
    return min(x[0], x[-1]), max(x[0], x[-1])


def _check_coverage(profile, exp_force, exp_torque):
    d_lo, d_hi = _hull(exp_force.x)
    if d_lo < 0.0 or d_hi > profile.depth_max:
        raise ParameterError(
            f"force data spans [{d_lo}, {d_hi}] mm, outside the simulated [0, {profile.depth_max}]"
        )
    a_lo, a_hi = _hull(exp_torque.x)
    s_lo, s_hi = sorted((profile.twist_start, profile.twist_end))
    if a_lo < s_lo or a_hi > s_hi:
        raise ParameterError(
            f"torque data spans [{a_lo}, {a_hi}] deg, outside the simulated [{s_lo}, {s_hi}]"
        )


def _evaluate_one(model, index, geom, profile, exp_force, exp_torque, zero_mean_tol):
    try:
        sim = simulate(model, geom, profile)
        nf, nt, _ = combined_nmse(sim, exp_force, exp_torque, zero_mean_tol)
    except (DualCharError, FloatingPointError, ArithmeticError) as exc:
        return FitResult.failed(model, index, f"{type(exc).__name__}: {exc}")
    if not (math.isfinite(nf) and math.isfinite(nt)):
        return FitResult.failed(model, index, "non-finite NMSE")
    return FitResult(model, nf, nt, index)


def evaluate_sweep(sets, geom: SpecimenGeometry, profile: MotionProfile, exp_force: Curve,
                   exp_torque: Curve, n_jobs: int = 1, zero_mean_tol=DEFAULT_ZERO_MEAN_TOL,
                   indices=None):
    """Score every parameter set; one :class:`FitResult` per set, input order.

    Failed forward evaluations are recorded with infinite NMSE. ``indices``
    overrides the recorded ``set_index`` (defaults to the position in ``sets``).
    """
    sets = list(sets)
    if not sets:
        raise ParameterError("evaluate_sweep needs at least one parameter set")
    indices = list(range(len(sets))) if indices is None else list(indices)
    if len(indices) != len(sets):
        raise ParameterError("indices and sets differ in length")
    profile.check_geometry(geom)
    _check_coverage(profile, exp_force, exp_torque)
    args = (geom, profile, exp_force, exp_torque, zero_mean_tol)
    if n_jobs == 1:
        return [_evaluate_one(m, i, *args) for m, i in zip(sets, indices)]
    # joblib returns results in submission order, so aggregation is deterministic
    return list(Parallel(n_jobs=n_jobs, batch_size="auto")(
        delayed(_evaluate_one)(m, i, *args) for m, i in zip(sets, indices)
    ))


def select_best(results, scenario) -> FitResult:
    """Winner of ``scenario``; ties go to the lowest ``set_index``."""
    results = list(results)
    if not results:
        raise ParameterError("select_best needs at least one result")
    scenario = FitScenario.parse(scenario)
    return min(results, key=lambda r: (r.score(scenario), r.set_index))


def select_all(results) -> dict:
    return {s: select_best(results, s) for s in FitScenario}


def generalize(per_point_results, sets=None) -> GeneralizationResult:
    """Single parameter set minimising the mean summed NMSE across spots.

    ``per_point_results`` is a points-by-candidates matrix of FitResult, each
    row listing the same candidates in the same order. The spread is the
    population standard deviation over the points.
    """
    rows = [list(r) for r in per_point_results]
    if not rows or not rows[0]:
        raise ParameterError("generalize needs at least one point and one candidate")
    m = len(rows[0])
    if any(len(r) != m for r in rows):
        raise ParameterError("ragged result matrix: every point must score the same candidates")
    for col in range(m):
        ids = {r[col].set_index for r in rows}
        if len(ids) != 1:
            raise ParameterError(f"candidate column {col} mixes set indices {sorted(ids)}")
    sums = np.array([[r.nmse_sum for r in row] for row in rows])
    with np.errstate(invalid="ignore"):
        means = sums.mean(axis=0)
    means = np.where(np.isnan(means), np.inf, means)
    order = sorted(range(m), key=lambda j: (means[j], rows[0][j].set_index))
    j = order[0]
    column = sums[:, j]
    params = rows[0][j].params if sets is None else sets[rows[0][j].set_index]
    return GeneralizationResult(
        params=params,
        set_index=rows[0][j].set_index,
        mean_nmse=float(means[j]),
        std_nmse=float(np.std(column)) if np.all(np.isfinite(column)) else math.inf,
        per_point_nmse=tuple(float(v) for v in column),
    )
