"""Rendering of sweep reports as text tables, JSON lines and plot CSVs."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .constitutive import model_from_params
from .fitting import FitResult, FitScenario

__all__ = ["FORMATS", "format_tables", "result_record", "record_to_result", "read_results",
           "emit_report"]

FORMATS = ("table-text", "json-lines", "plot-csv")


def _fmt(v) -> str:
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return "inf"
    return f"{v:.5g}"


def _row(cells, widths):
    return " | ".join(str(c).rjust(w) for c, w in zip(cells, widths))


def coefficient_table(report) -> list:
    """Winning parameters per spot and scenario."""
    names = list(report.param_names)
    header = ["Loc."] + [f"{s.value}:{n}" for s in report.scenarios for n in names]
    rows = []
    for spot in report.spots:
        cells = [spot.name]
        for s in report.scenarios:
            params = spot.winners[s].params.as_dict()
            cells += [_fmt(params[n]) for n in names]
        rows.append(cells)
    return _render(f"Set of coefficients per scenario ({report.model_family})", header, rows)


def nmse_table(report) -> list:
    """NMSE per spot and scenario; scenario I reports the summed error."""
    header = ["Loc."] + [s.value for s in report.scenarios]
    rows, columns = [], [[] for _ in report.scenarios]
    for spot in report.spots:
        cells = [spot.name]
        for k, s in enumerate(report.scenarios):
            v = spot.winners[s].score(s)
            columns[k].append(v)
            cells.append(_fmt(v))
        rows.append(cells)
    if report.spots:
        rows.append(["mean"] + [_fmt(float(np.mean(c))) for c in columns])
    return _render(f"NMSE per scenario and point ({report.model_family})", header, rows)


def _render(title, header, rows):
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    sep = "-+-".join("-" * w for w in widths)
    return [title, _row(header, widths), sep] + [_row(r, widths) for r in rows]


def format_tables(report) -> str:
    prov = report.provenance
    lines = [
        f"# dualchar {prov.get('version', '')}  seed={prov.get('seed')}  "
        f"config_hash={prov.get('config_hash')}",
        f"model: {report.model_family}  sampled: {report.n_sampled}  "
        f"stable: {report.n_stable}",
        "",
    ]
    lines += coefficient_table(report) + [""] + nmse_table(report) + [""]
    gaps = [(s.name, s.cross_axis_gap()) for s in report.spots]
    if any(g for _, g in gaps):
        lines.append("Cross-axis error of single-variable winners")
        for name, g in gaps:
            parts = [f"{k}={_fmt(v)}" for k, v in g.items()]
            lines.append(f"  spot {name}: " + "  ".join(parts))
        lines.append("")
    gen = report.generalization
    if gen is not None:
        params = "  ".join(f"{k}={_fmt(v)}" for k, v in gen.params.as_dict().items())
        lines.append("Generalised parameters (lowest mean summed NMSE over spots)")
        lines.append(f"  set {gen.set_index}: {params}")
        lines.append(f"  mean NMSE {_fmt(gen.mean_nmse)} +/- {_fmt(gen.std_nmse)}")
        lines.append("  per spot: " + ", ".join(_fmt(v) for v in gen.per_point_nmse))
    return "\n".join(lines) + "\n"


def _num(v):
    return v if math.isfinite(v) else None


def result_record(spot: str, result: FitResult, provenance: dict) -> dict:
    return {
        "spot": spot,
        "set_index": result.set_index,
        "model": result.params.family,
        "params": result.params.as_dict(),
        "nmse_force": _num(result.nmse_force),
        "nmse_torque": _num(result.nmse_torque),
        "nmse_sum": _num(result.nmse_sum),
        "status": result.status,
        "note": result.note,
        "seed": provenance.get("seed"),
        "config_hash": provenance.get("config_hash"),
        "version": provenance.get("version"),
    }


def record_to_result(rec: dict) -> FitResult:
    def val(v):
        return math.inf if v is None else float(v)

    model = model_from_params(rec["model"], rec["params"])
    return FitResult(model, val(rec["nmse_force"]), val(rec["nmse_torque"]), rec["set_index"],
                     rec.get("status", "ok"), rec.get("note", ""))


def read_results(path):
    """Parse ``results.jsonl`` into ``(spot, FitResult)`` pairs."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                out.append((rec["spot"], record_to_result(rec)))
    return out


def write_results(report, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for spot in report.spots:
            for r in spot.results:
                fh.write(json.dumps(result_record(spot.name, r, report.provenance)) + "\n")
    return path


def _provenance_comment(report) -> str:
    p = report.provenance
    return f"# seed={p.get('seed')} config_hash={p.get('config_hash')} version={p.get('version')}\n"


def write_plot_csvs(report, out_dir) -> list:
    out_dir = Path(out_dir)
    written = []
    for spot in report.spots:
        path = out_dir / f"coeffspace_{report.model_family}_{spot.name}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(_provenance_comment(report))
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["set_index", *report.param_names, "nmse_force", "nmse_torque",
                        "nmse_sum"])
            for r in spot.results:
                p = r.params.as_dict()
                w.writerow([r.set_index, *(repr(p[n]) for n in report.param_names),
                            repr(r.nmse_force), repr(r.nmse_torque), repr(r.nmse_sum)])
        written.append(path)

        path = out_dir / f"curves_{spot.name}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(_provenance_comment(report))
            w = csv.writer(fh, lineterminator="\n")
            sims = [s for s in FitScenario if s in spot.winner_curves]
            w.writerow(["quantity", "abscissa", "exp", *(f"sim_{s.value}" for s in sims)])
            blocks = (("force", spot.exp_force, "force_curve"),
                      ("torque", spot.exp_torque, "torque_curve"))
            for label, exp, attr in blocks:
                sim_y = [getattr(spot.winner_curves[s], attr).y for s in sims]
                for i, (x, y) in enumerate(zip(exp.x, exp.y)):
                    w.writerow([label, repr(float(x)), repr(float(y)),
                                *(repr(float(c[i])) for c in sim_y)])
        written.append(path)
    return written


def emit_report(report, out_dir, formats=FORMATS) -> list:
    """Write the requested formats into ``out_dir``; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    unknown = set(formats) - set(FORMATS)
    if unknown:
        raise ValueError(f"unknown report formats {sorted(unknown)}")
    written = []
    if "table-text" in formats:
        path = out_dir / "report.txt"
        path.write_text(format_tables(report), encoding="utf-8")
        written.append(path)
    if "json-lines" in formats:
        written.append(write_results(report, out_dir / "results.jsonl"))
    if "plot-csv" in formats:
        written += write_plot_csvs(report, out_dir)
    return written
