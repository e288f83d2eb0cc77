"""scikit-learn style estimators wrapping the characterisation sweep."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_abscissae, check_curve
from .fitting import (
    DEFAULT_ZERO_MEAN_TOL,
    FitScenario,
    combined_nmse,
    evaluate_sweep,
    generalize,
    select_best,
)
from .forward import MotionProfile, SpecimenGeometry, indentation_force, simulate, twist_torque
from .sampling import PUBLISHED_REGIONS, ParameterRegion, latin_hypercube
from .stability import StabilityProbe, stable_mask

__all__ = ["DualVariableCharacterizer", "GeneralizedCharacterizer"]


class _SweepMixin:
    def _region(self):
        if self.region is None:
            return ParameterRegion(self.model, PUBLISHED_REGIONS[self.model])
        if isinstance(self.region, ParameterRegion):
            return self.region
        return ParameterRegion.from_mapping(self.model, dict(self.region))

    def _profile(self):
        return MotionProfile(self.depth_max, self.depth_samples, self.twist_start,
                             self.twist_end, self.twist_samples)

    def _sample(self):
        sample = latin_hypercube(self._region(), self.n_samples, self.random_state)
        probe = self.probe if self.probe is not None else StabilityProbe()
        flags = stable_mask(sample.sets, probe, self.n_jobs)
        kept = [i for i, ok in enumerate(flags) if ok]
        if not kept:
            raise ValueError("no sampled parameter set passed the stability screen")
        return sample, kept


class DualVariableCharacterizer(_SweepMixin, BaseEstimator):
    """Pick hyperelastic parameters that reproduce force and torque curves.

    ``fit`` draws ``n_samples`` Latin hypercube sets from ``region`` (the
    published region of ``model`` when None), discards Drucker-unstable sets
    and scores the rest against the measured curves. The winner under
    ``scenario`` becomes ``model_``.

    Parameters
    ----------
    model : {"ogden", "yeoh", "neohookean"}
    region : ParameterRegion, mapping of name -> (low, high), or None
    n_samples : int
    random_state : int
        Seed of the Latin hypercube.
    scenario : {"I", "II", "III"}
        Summed error, torque only or force only.
    indenter_diameter, gauge_height : float
        Specimen geometry in mm.
    contact : {"chord", "clamped"}
        Contact radius past the indenter's equator.
    depth_max, depth_samples, twist_start, twist_end, twist_samples
        Simulated motion profile.
    probe : StabilityProbe or None
    zero_mean_tol : float
    n_jobs : int

    Attributes
    ----------
    results_ : list of FitResult
    winners_ : dict mapping FitScenario to FitResult
    best_ : FitResult
    model_ : MaterialModel
    best_params_ : dict
    n_stable_ : int
    """

    def __init__(self, model="yeoh", region=None, n_samples=250, random_state=0, scenario="I",
                 indenter_diameter=15.0, gauge_height=20.0, contact="chord", depth_max=10.0,
                 depth_samples=200, twist_start=22.5, twist_end=-22.5, twist_samples=181,
                 probe=None, zero_mean_tol=DEFAULT_ZERO_MEAN_TOL, n_jobs=1):
        self.model = model
        self.region = region
        self.n_samples = n_samples
        self.random_state = random_state
        self.scenario = scenario
        self.indenter_diameter = indenter_diameter
        self.gauge_height = gauge_height
        self.contact = contact
        self.depth_max = depth_max
        self.depth_samples = depth_samples
        self.twist_start = twist_start
        self.twist_end = twist_end
        self.twist_samples = twist_samples
        self.probe = probe
        self.zero_mean_tol = zero_mean_tol
        self.n_jobs = n_jobs

    def _geometry(self):
        return SpecimenGeometry(self.indenter_diameter, self.gauge_height, self.contact)

    def fit(self, force, torque):
        """Fit to a force-displacement and a torque-rotation curve.

        Each curve is a :class:`~dualchar.curves.Curve`, an ``(n, 2)`` array
        or an ``(x, y)`` pair.
        """
        force = check_curve(force, "force")
        torque = check_curve(torque, "torque")
        scenario = FitScenario.parse(self.scenario)
        sample, kept = self._sample()
        self.sample_ = sample
        self.stable_indices_ = kept
        self.n_stable_ = len(kept)
        self.results_ = evaluate_sweep([sample.sets[i] for i in kept], self._geometry(),
                                       self._profile(), force, torque, n_jobs=self.n_jobs,
                                       zero_mean_tol=self.zero_mean_tol, indices=kept)
        self.winners_ = {s: select_best(self.results_, s) for s in FitScenario}
        self.best_ = self.winners_[scenario]
        self.model_ = self.best_.params
        self.best_params_ = self.model_.as_dict()
        return self

    def predict(self, depths):
        """Indentation force (N) of the fitted model at ``depths`` (mm)."""
        check_is_fitted(self, "model_")
        return np.asarray(indentation_force(self.model_, self._geometry(),
                                            check_abscissae(depths, "depths")))

    def predict_torque(self, angles):
        """Twist torque (N*mm) at full depth for ``angles`` in degrees."""
        check_is_fitted(self, "model_")
        return np.asarray(twist_torque(self.model_, self._geometry(), self.depth_max,
                                       check_abscissae(angles, "angles")))

    def simulate(self):
        check_is_fitted(self, "model_")
        return simulate(self.model_, self._geometry(), self._profile())

    def score(self, force, torque):
        """Negative summed NMSE of the fitted model (higher is better)."""
        check_is_fitted(self, "model_")
        _, _, total = combined_nmse(self.simulate(), check_curve(force, "force"),
                                    check_curve(torque, "torque"), self.zero_mean_tol)
        return -total


class GeneralizedCharacterizer(_SweepMixin, BaseEstimator):
    """One parameter set for several spots, by lowest mean summed NMSE.

    ``fit`` takes a list of ``(gauge_height, force, torque)`` triples, one per
    characterisation spot.
    """

    def __init__(self, model="yeoh", region=None, n_samples=250, random_state=0,
                 indenter_diameter=15.0, contact="chord", depth_max=10.0, depth_samples=200,
                 twist_start=22.5, twist_end=-22.5, twist_samples=181, probe=None,
                 zero_mean_tol=DEFAULT_ZERO_MEAN_TOL, n_jobs=1):
        self.model = model
        self.region = region
        self.n_samples = n_samples
        self.random_state = random_state
        self.indenter_diameter = indenter_diameter
        self.contact = contact
        self.depth_max = depth_max
        self.depth_samples = depth_samples
        self.twist_start = twist_start
        self.twist_end = twist_end
        self.twist_samples = twist_samples
        self.probe = probe
        self.zero_mean_tol = zero_mean_tol
        self.n_jobs = n_jobs

    def fit(self, spots):
        spots = list(spots)
        if not spots:
            raise ValueError("at least one spot is required")
        sample, kept = self._sample()
        candidates = [sample.sets[i] for i in kept]
        profile = self._profile()
        self.per_point_results_ = []
        for gauge, force, torque in spots:
            geom = SpecimenGeometry(self.indenter_diameter, gauge, self.contact)
            self.per_point_results_.append(evaluate_sweep(
                candidates, geom, profile, check_curve(force, "force"),
                check_curve(torque, "torque"), n_jobs=self.n_jobs,
                zero_mean_tol=self.zero_mean_tol, indices=kept))
        self.generalization_ = generalize(self.per_point_results_)
        self.model_ = self.generalization_.params
        self.mean_nmse_ = self.generalization_.mean_nmse
        self.std_nmse_ = self.generalization_.std_nmse
        return self
