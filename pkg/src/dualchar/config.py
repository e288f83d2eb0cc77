"""
Run configuration.

A run is described by a TOML file with ``[run]``, optional ``[region]``,
``[profile]``, ``[probe]`` and ``[synth]`` tables, and one ``[spots.<name>]``
table per characterisation spot::

    [run]
    model = "yeoh"
    n_samples = 250
    seed = 0
    scenarios = ["I", "II", "III"]

    [synth]
    params = { c1 = 0.0129, c2 = -2.016e-3, c3 = 2.7623e-4 }
    noise_rel = 0.01
    seed = 1

    [spots.1]
    gauge_height = 20.0

    [spots.2]
    gauge_height = 24.0
    force_csv = "spot2_force.csv"
    torque_csv = "spot2_torque.csv"

Relative CSV paths resolve against the config file's directory. A spot
without CSV paths is generated from the ``[synth]`` block.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional

import tomli

from .constitutive import MODEL_FAMILIES, MaterialModel, model_from_params
from .exceptions import ConfigError, DualCharError
from .fitting import DEFAULT_ZERO_MEAN_TOL, FitScenario
from .forward import MotionProfile, SpecimenGeometry
from .sampling import PUBLISHED_REGIONS, ParameterRegion
from .stability import StabilityProbe

__all__ = ["SynthSpec", "SpotConfig", "RunConfig", "load_config", "parse_config"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthSpec:
    true_model: MaterialModel
    noise_rel: float = 0.01
    seed: int = 0


@dataclass(frozen=True)
class SpotConfig:
    name: str
    geometry: SpecimenGeometry
    force_csv: Optional[Path] = None
    torque_csv: Optional[Path] = None
    synth: Optional[SynthSpec] = None


@dataclass(frozen=True)
class RunConfig:
    model_family: str
    region: ParameterRegion
    spots: tuple
    n_samples: int = 250
    seed: int = 0
    profile: MotionProfile = field(default_factory=MotionProfile)
    probe: StabilityProbe = field(default_factory=StabilityProbe)
    scenarios: tuple = tuple(FitScenario)
    zero_mean_tol: float = DEFAULT_ZERO_MEAN_TOL
    jobs: int = 1
    source: Optional[Path] = None

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, seed=int(seed))

    def spot(self, name: str) -> SpotConfig:
        for s in self.spots:
            if s.name == name:
                return s
        raise KeyError(name)

    def canonical(self) -> dict:
        """Result-determining content; parallelism and paths of origin excluded."""

        def model_dict(m):
            return {"family": m.family, **m.as_dict()}

        spots = []
        for s in self.spots:
            entry = {"name": s.name, "geometry": asdict(s.geometry)}
            if s.synth is not None:
                entry["synth"] = {"model": model_dict(s.synth.true_model),
                                  "noise_rel": s.synth.noise_rel, "seed": s.synth.seed}
            else:
                entry["force_sha256"] = _file_hash(s.force_csv)
                entry["torque_sha256"] = _file_hash(s.torque_csv)
            spots.append(entry)
        return {
            "model": self.model_family,
            "region": [list(b) for b in self.region.bounds],
            "n_samples": self.n_samples,
            "seed": self.seed,
            "profile": asdict(self.profile),
            "probe": {k: list(v) if isinstance(v, tuple) else v
                      for k, v in asdict(self.probe).items()},
            "scenarios": [s.value for s in self.scenarios],
            "zero_mean_tol": self.zero_mean_tol,
            "spots": spots,
        }

    @property
    def config_hash(self) -> str:
        text = json.dumps(self.canonical(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _file_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


_RUN_KEYS = {"model", "n_samples", "seed", "scenarios", "zero_mean_tol", "jobs"}
_PROFILE_KEYS = {"depth_max", "depth_samples", "twist_start", "twist_end", "twist_samples"}
_PROBE_KEYS = {"paths", "stretch_range", "shear_range", "steps", "tol"}
_SPOT_KEYS = {"gauge_height", "indenter_diameter", "contact", "force_csv", "torque_csv", "synth"}
_SYNTH_KEYS = {"model", "params", "noise_rel", "seed"}


def load_config(path) -> RunConfig:
    """Read and validate a TOML run configuration."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, base_dir=path.parent, source=path)


def parse_config(text: str, base_dir=".", source=None) -> RunConfig:
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        # tomli reports "(at line L, column C)"
        raise ConfigError(f"config parse error: {exc}") from None
    problems = []
    base_dir = Path(base_dir)

    def unknown(section, table, allowed):
        for k in sorted(set(table) - allowed):
            problems.append(f"[{section}] unknown key {k!r}")

    for k in sorted(set(raw) - {"run", "region", "profile", "probe", "synth", "spots"}):
        problems.append(f"unknown section [{k}]")

    run = raw.get("run", {})
    unknown("run", run, _RUN_KEYS)
    family = run.get("model")
    if family not in MODEL_FAMILIES:
        problems.append(f"[run] model must be one of {sorted(MODEL_FAMILIES)}, got {family!r}")
        family = None

    n = run.get("n_samples", 250)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        problems.append(f"[run] n_samples must be an integer >= 1, got {n!r}")
    seed = run.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        problems.append(f"[run] seed must be an integer, got {seed!r}")
    jobs = run.get("jobs", 1)
    if not isinstance(jobs, int) or jobs == 0:
        problems.append(f"[run] jobs must be a non-zero integer, got {jobs!r}")
    tol = run.get("zero_mean_tol", DEFAULT_ZERO_MEAN_TOL)
    if not isinstance(tol, (int, float)) or tol < 0:
        problems.append(f"[run] zero_mean_tol must be >= 0, got {tol!r}")
    scenarios = ()
    try:
        scenarios = tuple(FitScenario.parse(s) for s in run.get("scenarios", ["I", "II", "III"]))
    except DualCharError as exc:
        problems.append(f"[run] {exc}")

    region = None
    if family is not None:
        region_raw = raw.get("region")
        try:
            if region_raw is None:
                region = ParameterRegion(family, PUBLISHED_REGIONS[family])
            else:
                bounds = []
                for name, pair in region_raw.items():
                    if not (isinstance(pair, list) and len(pair) == 2):
                        problems.append(f"[region] {name} must be a [low, high] pair")
                        continue
                    bounds.append((name, pair[0], pair[1]))
                region = ParameterRegion(family, tuple(bounds))
        except (DualCharError, TypeError) as exc:
            problems.append(f"[region] {exc}")

    profile = _build("profile", raw.get("profile", {}), _PROFILE_KEYS, MotionProfile, problems)
    probe_raw = dict(raw.get("probe", {}))
    for key in ("paths", "stretch_range", "shear_range"):
        if key in probe_raw and isinstance(probe_raw[key], list):
            probe_raw[key] = tuple(probe_raw[key])
    probe = _build("probe", probe_raw, _PROBE_KEYS, StabilityProbe, problems)

    global_synth = None
    if "synth" in raw:
        global_synth = _synth(raw["synth"], family, "synth", problems)

    spots = []
    spots_raw = raw.get("spots", {})
    if not spots_raw:
        problems.append("at least one [spots.<name>] table is required")
    for name, table in spots_raw.items():
        spots.append(_spot(str(name), table, family, global_synth, base_dir, profile, problems))

    if problems:
        raise ConfigError(problems)
    return RunConfig(
        model_family=family,
        region=region,
        spots=tuple(spots),
        n_samples=n,
        seed=seed,
        profile=profile,
        probe=probe,
        scenarios=scenarios,
        zero_mean_tol=float(tol),
        jobs=jobs,
        source=Path(source) if source else None,
    )


def _build(section, table, allowed, cls, problems):
    bad = set(table) - allowed
    for k in sorted(bad):
        problems.append(f"[{section}] unknown key {k!r}")
    kwargs = {k: v for k, v in table.items() if k in allowed}
    try:
        return cls(**kwargs)
    except (DualCharError, TypeError, ValueError) as exc:
        problems.append(f"[{section}] {exc}")
        return cls()


def _synth(table, family, where, problems):
    for k in sorted(set(table) - _SYNTH_KEYS):
        problems.append(f"[{where}] unknown key {k!r}")
    fam = table.get("model", family)
    params = table.get("params")
    if not isinstance(params, dict):
        problems.append(f"[{where}] params table is required")
        return None
    noise = table.get("noise_rel", 0.01)
    if not isinstance(noise, (int, float)) or noise < 0:
        problems.append(f"[{where}] noise_rel must be >= 0, got {noise!r}")
        return None
    seed = table.get("seed", 0)
    if not isinstance(seed, int):
        problems.append(f"[{where}] seed must be an integer")
        return None
    try:
        model = model_from_params(fam, params)
    except DualCharError as exc:
        problems.append(f"[{where}] {exc}")
        return None
    return SynthSpec(model, float(noise), seed)


def _spot(name, table, family, global_synth, base_dir, profile, problems):
    where = f"spots.{name}"
    for k in sorted(set(table) - _SPOT_KEYS):
        problems.append(f"[{where}] unknown key {k!r}")
    try:
        geom = SpecimenGeometry(
            indenter_diameter=table.get("indenter_diameter", 15.0),
            gauge_height=table.get("gauge_height", 20.0),
            contact=table.get("contact", "chord"),
        )
        profile.check_geometry(geom)
    except DualCharError as exc:
        problems.append(f"[{where}] {exc}")
        geom = SpecimenGeometry()
    fpath, tpath = table.get("force_csv"), table.get("torque_csv")
    synth = None
    if fpath is None and tpath is None:
        if "synth" in table:
            synth = _synth(table["synth"], family, f"{where}.synth", problems)
        elif global_synth is not None:
            synth = global_synth
        else:
            problems.append(f"[{where}] needs force_csv and torque_csv, or a synth block")
    elif fpath is None or tpath is None:
        problems.append(f"[{where}] force_csv and torque_csv must be given together")
    else:
        fpath, tpath = base_dir / fpath, base_dir / tpath
        for p in (fpath, tpath):
            if not p.is_file():
                problems.append(f"[{where}] data file not found: {p}")
    return SpotConfig(name, geom, fpath if synth is None else None,
                      tpath if synth is None else None, synth)
