"""Reading and writing experimental curves as CSV."""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import numpy as np

from .curves import Curve
from .exceptions import CurveError, DataError

__all__ = ["FORCE_HEADER", "TORQUE_HEADER", "read_curve_csv", "write_curve_csv", "ingest_curves"]

logger = logging.getLogger(__name__)

FORCE_HEADER = ("displacement_mm", "force_N")
TORQUE_HEADER = ("rotation_deg", "torque_Nmm")


def _rows(path: Path):
    # '#' lines carry provenance and are skipped
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (row[0].lstrip().startswith("#")):
                continue
            yield lineno, row


def read_curve_csv(path, header) -> Curve:
    """Load a two-column curve, averaging ordinates of repeated abscissae."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: file not found")
    rows = _rows(path)
    try:
        lineno, first = next(rows)
    except StopIteration:
        raise DataError(f"{path}: empty file") from None
    got = tuple(c.strip() for c in first)
    if got != tuple(header):
        raise DataError(f"{path}:{lineno}: expected header {','.join(header)}, got {','.join(got)}")
    xs, ys = [], []
    for lineno, row in rows:
        if len(row) != 2:
            raise DataError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        vals = []
        for col, cell in zip(header, row):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}:{lineno}: column {col}: non-numeric value {cell!r}") from None
            if not np.isfinite(v):
                raise DataError(f"{path}:{lineno}: column {col}: non-finite value {cell!r}")
            vals.append(v)
        xs.append(vals[0])
        ys.append(vals[1])
    if len(xs) < 2:
        raise DataError(f"{path}: need at least 2 data rows, got {len(xs)}")
    x, y = _collapse_duplicates(np.array(xs), np.array(ys), path)
    try:
        return Curve(x, y)
    except CurveError as exc:
        raise DataError(f"{path}: {exc}") from None


def _collapse_duplicates(x, y, path):
    # merge runs of equal consecutive abscissae; order of the file is kept
    out_x, out_y, dupes = [], [], 0
    i = 0
    while i < x.size:
        j = i + 1
        while j < x.size and x[j] == x[i]:
            j += 1
        out_x.append(x[i])
        out_y.append(y[i:j].mean() if j - i > 1 else y[i])
        dupes += j - i - 1
        i = j
    if dupes:
        logger.warning("%s: collapsed %d duplicated abscissa row(s) by averaging", path, dupes)
    return np.array(out_x), np.array(out_y)


def write_curve_csv(path, curve: Curve, header, comment: str = "") -> Path:
    """Write ``curve`` in the ingestion format; floats use round-trip repr."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for xv, yv in zip(curve.x, curve.y):
            w.writerow([repr(float(xv)), repr(float(yv))])
    return path


def ingest_curves(force_csv, torque_csv):
    """Load the measured force-displacement and torque-rotation curves."""
    return read_curve_csv(force_csv, FORCE_HEADER), read_curve_csv(torque_csv, TORQUE_HEADER)
