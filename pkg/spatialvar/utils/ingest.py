"""
CSV loaders for snapshots, field moments and weights.

Every file is UTF-8, comma-delimited, with a mandatory header row. Row
order defines site order. Parse failures name the file and the line.

Functions
---------
ingest_epoch_csv(path) -> EpochField
    Columns site_id, value
ingest_field_stats_csv(mu_path, second_path) -> FieldStats
    mu file: site_id, mu; second-moment file: dense N x N with a header
    row, or triplets with header i, j, value (0-based, mirrored when only
    one triangle is given)
ingest_weights_csv(path, n=None) -> WeightVector
    Columns site_id, weight
"""
from __future__ import annotations

import csv
import logging
import math
import pathlib
from typing import List, Optional, Tuple, Union

import numpy as np

from ..errors import InputError
from ..fields import EpochField, FieldStats, WeightVector

__all__ = ["ingest_epoch_csv", "ingest_field_stats_csv", "ingest_weights_csv"]

log = logging.getLogger(__name__)


# ── Constants ──────────────────────────────────────────────────────
SKEW_TOLERANCE = 1e-9              # relative asymmetry averaged away on ingestion
TRIPLET_HEADER = ["i", "j", "value"]

PathLike = Union[str, pathlib.Path]
Rows = List[Tuple[int, List[str]]]


def _read(path: PathLike) -> Tuple[List[str], Rows]:
    """
    Header and numbered data rows of a CSV file.

    Raises
    ------
    FileNotFoundError
        If the path does not exist
    InputError
        If the file has no header or no data rows
    """
    path = pathlib.Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        rows = [(reader.line_num, row) for row in reader if any(cell.strip() for cell in row)]
    if header is None or not rows:
        raise InputError(f"{path}: no data rows", "empty-file")
    return [cell.strip() for cell in header], rows


def _number(path: PathLike, line: int, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"{path}:{line}: cannot parse {text.strip()!r} as a number",
                         "parse-error") from None
    if not math.isfinite(value):
        raise InputError(f"{path}:{line}: non-finite value {text.strip()!r}", "non-finite-value")
    return value


def _column(path: PathLike, name: str) -> np.ndarray:
    """Second column of a two-column site_id,<name> file."""
    header, rows = _read(path)
    if len(header) < 2:
        raise InputError(f"{path}: expected columns site_id,{name}", "bad-header")
    values = []
    for line, row in rows:
        if len(row) < 2:
            raise InputError(f"{path}:{line}: missing {name} column", "parse-error")
        values.append(_number(path, line, row[1]))
    return np.array(values, dtype=np.float64)


# ── Loaders ────────────────────────────────────────────────────────
def ingest_epoch_csv(path: PathLike) -> EpochField:
    """Snapshot values from a site_id,value file."""
    ef = EpochField(_column(path, "value"))
    log.info("Loaded %d site values from %s", ef.n, path)
    return ef


def ingest_weights_csv(path: PathLike, n: Optional[int] = None) -> WeightVector:
    """Averaging weights from a site_id,weight file, renormalized to sum 1."""
    w = WeightVector(_column(path, "weight"))
    if n is not None and w.n != n:
        raise InputError(f"{path}: {w.n} weights for {n} sites", "dimension-mismatch")
    return w


def _triplets(path: PathLike, rows: Rows, n: int) -> np.ndarray:
    matrix = np.zeros((n, n))
    given = set()
    for line, row in rows:
        if len(row) != 3:
            raise InputError(f"{path}:{line}: expected i,j,value", "parse-error")
        try:
            i, j = int(row[0]), int(row[1])
        except ValueError:
            raise InputError(f"{path}:{line}: indices must be integers", "parse-error") from None
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"{path}:{line}: index ({i}, {j}) outside a {n} x {n} matrix",
                             "dimension-mismatch")
        matrix[i, j] = _number(path, line, row[2])
        given.add((i, j))
    for i, j in given:
        if (j, i) not in given:
            matrix[j, i] = matrix[i, j]
    return matrix


def _dense(path: PathLike, header: List[str], rows: Rows) -> np.ndarray:
    width = len(header)
    matrix = []
    for line, row in rows:
        if len(row) != width:
            raise InputError(f"{path}:{line}: expected {width} columns, got {len(row)}",
                             "parse-error")
        matrix.append([_number(path, line, cell) for cell in row])
    if len(matrix) != width:
        raise InputError(f"{path}: {len(matrix)} rows for {width} columns", "dimension-mismatch")
    return np.array(matrix, dtype=np.float64)


def ingest_field_stats_csv(mu_path: PathLike, second_path: PathLike) -> FieldStats:
    """
    Field moments from a mean file and a second-moment file.

    Small asymmetry (up to 1e-9 of the largest entry) is averaged away;
    anything larger is rejected. An indefinite implied covariance only
    warns, since empirical moment estimates are often indefinite by
    sampling noise.

    Raises
    ------
    InputError
        On parse errors, dimension mismatch or asymmetry beyond tolerance
    """
    mu = _column(mu_path, "mu")
    n = mu.size
    header, rows = _read(second_path)
    if [cell.lower() for cell in header] == TRIPLET_HEADER:
        second = _triplets(second_path, rows, n)
    else:
        second = _dense(second_path, header, rows)
    if second.shape != (n, n):
        raise InputError(f"{second_path}: {second.shape[0]} x {second.shape[1]} matrix "
                         f"for {n} means", "dimension-mismatch")

    scale = float(np.max(np.abs(second))) or 1.0
    skew = float(np.max(np.abs(second - second.T)))
    if skew > SKEW_TOLERANCE * scale:
        raise InputError(
            f"{second_path}: matrix is not symmetric (relative skew {skew / scale:.3g})",
            "asymmetric-matrix",
        )
    if skew > 0.0:
        log.info("Symmetrized %s (relative skew %.3g)", second_path, skew / scale)
        second = 0.5 * (second + second.T)
    f = FieldStats(mu, second, strict=False)
    log.info("Loaded field moments for %d sites", n)
    return f
