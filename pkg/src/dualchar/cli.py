"""Command line entry point: ``dualchar <subcommand> --config run.toml``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import load_config
from .exceptions import ConfigError, DataError, DualCharError, NumericalError
from .fitting import FitScenario
from .io import FORCE_HEADER, TORQUE_HEADER, write_curve_csv
from .pipeline import replay, run_characterisation, synth_experiment
from .report import coefficient_table, emit_report, nmse_table, result_record

logger = logging.getLogger("dualchar")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERICAL = 0, 1, 2, 3


def _add_globals(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", default=d, help="TOML run configuration")
    p.add_argument("--seed", type=int, default=d, help="override the sampling seed")
    p.add_argument("--jobs", type=int, default=d, help="parallel workers (-1 = all cores)")
    p.add_argument("--out-dir", default=d if suppress else "out", help="output directory")
    p.add_argument("-v", "--verbose", action="count", default=d if suppress else 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualchar",
        description="Dual-variable (force + torque) hyperelastic characterisation.",
    )
    parser.add_argument("--version", action="version", version=f"dualchar {__version__}")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        _add_globals(p, suppress=True)
        return p

    add("synth", "write synthetic experiment CSVs for spots driven by a synth block")
    add("sweep", "run the sweep and write results.jsonl and coefficient-space CSVs")
    p = add("fit", "print the winning parameters of one scenario per spot")
    p.add_argument("--scenario", default="I", help="I (sum), II (torque) or III (force)")
    add("scenarios", "print the coefficient and NMSE tables for all scenarios")
    add("generalize", "print the single set with the lowest mean NMSE over spots")
    add("report", "run the pipeline and write every report format")
    p = add("replay", "re-derive one (spot, set) result from seed and config")
    p.add_argument("--spot", required=True)
    p.add_argument("--set-index", type=int, required=True)
    return parser


def _load(args):
    if not args.config:
        raise ConfigError("--config is required")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def _run(cfg, args):
    return run_characterisation(cfg, n_jobs=args.jobs)


def cmd_synth(cfg, args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n = 0
    for spot in cfg.spots:
        if spot.synth is None:
            continue
        s = spot.synth
        f, t = synth_experiment(s.true_model, spot.geometry, cfg.profile, s.noise_rel, s.seed)
        note = (f"synthetic spot={spot.name} model={s.true_model} noise_rel={s.noise_rel} "
                f"seed={s.seed} config_hash={cfg.config_hash}")
        write_curve_csv(out / f"spot{spot.name}_force.csv", f, FORCE_HEADER, note)
        write_curve_csv(out / f"spot{spot.name}_torque.csv", t, TORQUE_HEADER, note)
        n += 1
    print(f"wrote synthetic curves for {n} spot(s) to {out}")


def cmd_sweep(cfg, args):
    report = _run(cfg, args)
    paths = emit_report(report, args.out_dir, formats=("json-lines", "plot-csv"))
    print(f"{report.n_stable}/{report.n_sampled} stable sets swept over {len(report.spots)} "
          f"spot(s); wrote {len(paths)} file(s) to {args.out_dir}")


def cmd_fit(cfg, args):
    scenario = FitScenario.parse(args.scenario)
    if scenario not in cfg.scenarios:
        cfg = replace(cfg, scenarios=cfg.scenarios + (scenario,))
    report = _run(cfg, args)
    for spot in report.spots:
        w = spot.winners[scenario]
        params = " ".join(f"{k}={v:.6g}" for k, v in w.params.as_dict().items())
        print(f"spot {spot.name} scenario {scenario.value}: set {w.set_index} {params} "
              f"nmse_force={w.nmse_force:.5g} nmse_torque={w.nmse_torque:.5g} "
              f"nmse_sum={w.nmse_sum:.5g}")


def cmd_scenarios(cfg, args):
    report = _run(cfg, args)
    print("\n".join(coefficient_table(report) + [""] + nmse_table(report)))


def cmd_generalize(cfg, args):
    report = _run(cfg, args)
    g = report.generalization
    params = " ".join(f"{k}={v:.6g}" for k, v in g.params.as_dict().items())
    print(f"set {g.set_index}: {params}")
    print(f"mean NMSE {g.mean_nmse:.5g} +/- {g.std_nmse:.5g} over {len(g.per_point_nmse)} spot(s)")


def cmd_report(cfg, args):
    report = _run(cfg, args)
    for p in emit_report(report, args.out_dir):
        print(p)


def cmd_replay(cfg, args):
    r = replay(cfg, args.spot, args.set_index)
    prov = {"seed": cfg.seed, "config_hash": cfg.config_hash, "version": __version__}
    print(json.dumps(result_record(args.spot, r, prov)))


COMMANDS = {
    "synth": cmd_synth,
    "sweep": cmd_sweep,
    "fit": cmd_fit,
    "scenarios": cmd_scenarios,
    "generalize": cmd_generalize,
    "report": cmd_report,
    "replay": cmd_replay,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose or 0, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _load(args)
        if args.jobs is None:
            args.jobs = cfg.jobs
        COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DataError, DualCharError, KeyError, IndexError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
