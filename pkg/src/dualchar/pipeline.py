"""Characterisation pipeline: sample, screen, sweep, select, generalise."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .config import RunConfig, SpotConfig
from .curves import Curve, resample
from .exceptions import DualCharError, NumericalError
from .fitting import (
    FitResult,
    FitScenario,
    GeneralizationResult,
    combined_nmse,
    evaluate_sweep,
    generalize,
    select_best,
)
from .forward import MotionProfile, SimCurves, SpecimenGeometry, simulate
from .io import ingest_curves
from .sampling import SampleSet, latin_hypercube
from .stability import stable_mask

__all__ = [
    "AllSetsFailedError",
    "SpotResult",
    "SweepReport",
    "synth_experiment",
    "run_characterisation",
    "replay",
]

logger = logging.getLogger(__name__)


class AllSetsFailedError(NumericalError):
    """Every candidate set failed at some spot, or none survived screening."""


def synth_experiment(true_model, geom: SpecimenGeometry, profile: MotionProfile,
                     noise_rel: float = 0.01, seed: int = 0):
    """Forward curves of ``true_model`` with seeded Gaussian noise.

    The noise standard deviation is ``noise_rel * max|y|`` of each curve.
    """
    if noise_rel < 0:
        raise ValueError("noise_rel must be non-negative")
    sim = simulate(true_model, geom, profile)
    if noise_rel == 0:
        return sim.force_curve, sim.torque_curve
    rng = np.random.default_rng(np.uint64(seed % 2**64))
    out = []
    for c in (sim.force_curve, sim.torque_curve):
        sd = noise_rel * np.max(np.abs(c.y))
        out.append(Curve(c.x, c.y + rng.normal(0.0, sd, c.y.size)))
    return tuple(out)


@dataclass
class SpotResult:
    name: str
    geometry: SpecimenGeometry
    exp_force: Curve
    exp_torque: Curve
    results: list
    winners: dict
    winner_curves: dict = field(default_factory=dict)

    def cross_axis_gap(self) -> dict:
        """Error on the axis a single-variable winner ignored."""
        out = {}
        if FitScenario.TORQUE_ONLY in self.winners:
            out["force_nmse_of_torque_winner"] = self.winners[FitScenario.TORQUE_ONLY].nmse_force
        if FitScenario.FORCE_ONLY in self.winners:
            out["torque_nmse_of_force_winner"] = self.winners[FitScenario.FORCE_ONLY].nmse_torque
        return out


@dataclass
class SweepReport:
    model_family: str
    param_names: tuple
    scenarios: tuple
    spots: list
    generalization: Optional[GeneralizationResult]
    n_sampled: int
    n_stable: int
    provenance: dict


def _spot_curves(spot: SpotConfig, profile: MotionProfile):
    if spot.synth is not None:
        s = spot.synth
        return synth_experiment(s.true_model, spot.geometry, profile, s.noise_rel, s.seed)
    return ingest_curves(spot.force_csv, spot.torque_csv)


def _winner_curves(model, spot: SpotConfig, profile, exp_force, exp_torque):
    sim = simulate(model, spot.geometry, profile)
    return SimCurves(resample(sim.force_curve, exp_force.x),
                     resample(sim.torque_curve, exp_torque.x))


def sample_and_screen(config: RunConfig, n_jobs: int = 1):
    """LHS sample of the region and the indices that pass stability screening."""
    sample = latin_hypercube(config.region, config.n_samples, config.seed)
    flags = stable_mask(sample.sets, config.probe, n_jobs)
    kept = [i for i, ok in enumerate(flags) if ok]
    logger.info("%d of %d %s sets pass the stability screen", len(kept), len(sample),
                config.model_family)
    return sample, kept


def run_characterisation(config: RunConfig, n_jobs: Optional[int] = None) -> SweepReport:
    """Run the full pipeline for every configured spot.

    Results depend only on the configuration; ``n_jobs`` changes speed, not
    output.
    """
    n_jobs = config.jobs if n_jobs is None else n_jobs
    sample, kept = sample_and_screen(config, n_jobs)
    if not kept:
        raise AllSetsFailedError(f"no {config.model_family} set passed the stability screen")
    candidates = [sample.sets[i] for i in kept]
    spots = []
    for spot in config.spots:
        try:
            exp_force, exp_torque = _spot_curves(spot, config.profile)
        except DualCharError as exc:
            raise type(exc)(f"spot {spot.name}: {exc}") from exc
        results = evaluate_sweep(candidates, spot.geometry, config.profile, exp_force,
                                 exp_torque, n_jobs=n_jobs, zero_mean_tol=config.zero_mean_tol,
                                 indices=kept)
        ok = [r for r in results if r.status == "ok"]
        if not ok:
            notes = sorted({r.note for r in results})[:3]
            raise AllSetsFailedError(f"spot {spot.name}: all {len(results)} sets failed ({notes})")
        winners = {s: select_best(results, s) for s in config.scenarios}
        curves = {s: _winner_curves(w.params, spot, config.profile, exp_force, exp_torque)
                  for s, w in winners.items()}
        spots.append(SpotResult(spot.name, spot.geometry, exp_force, exp_torque, results,
                                winners, curves))
    gen = generalize([s.results for s in spots])
    return SweepReport(
        model_family=config.model_family,
        param_names=tuple(config.region.names),
        scenarios=tuple(config.scenarios),
        spots=spots,
        generalization=gen,
        n_sampled=len(sample),
        n_stable=len(kept),
        provenance={"seed": config.seed, "config_hash": config.config_hash,
                    "version": __version__},
    )


def replay(config: RunConfig, spot_name: str, set_index: int) -> FitResult:
    """Re-derive one (spot, set) result from the seed and configuration alone."""
    sample = latin_hypercube(config.region, config.n_samples, config.seed)
    if not 0 <= set_index < len(sample):
        raise IndexError(f"set index {set_index} outside 0..{len(sample) - 1}")
    spot = config.spot(spot_name)
    model = sample.sets[set_index]
    exp_force, exp_torque = _spot_curves(spot, config.profile)
    sim = simulate(model, spot.geometry, config.profile)
    nf, nt, _ = combined_nmse(sim, exp_force, exp_torque, config.zero_mean_tol)
    return FitResult(model, nf, nt, set_index)
