"""
Relative error of the large-N snapshot formula across an (alpha, N) grid.

For every subset size N a seeded random subset of the field's sites is
drawn once; for every alpha the subset's ensemble variance is compared
with ((1 - alpha)/alpha) sigma_s^2 / N. Cells are independent: each one
has its own seed derived from (seed, alpha, N), so adding or removing a
grid value leaves the other cells untouched.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import astuple, dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from ..errors import InputError
from ..estimators import variance_single_epoch_large_n
from ..fields import EpochField, ReportingModel, WeightVector
from ..utils.tables import format_value, write_table
from .ensemble import simulate_epoch_ensemble
from .streams import GOLDEN_GAMMA, derive_seed, mix64

__all__ = [
    "ERROR_THRESHOLD",
    "SWEEP_COLUMNS",
    "SweepCell",
    "SweepGrid",
    "select_subset",
    "relative_error_sweep",
]

log = logging.getLogger(__name__)


# ── Constants ──────────────────────────────────────────────────────
ERROR_THRESHOLD = 0.1
SUBSET_STREAM   = 1                # counter labels of the derived seeds
CELL_STREAM     = 2

SWEEP_COLUMNS = (
    "alpha",
    "n",
    "mc_variance",
    "formula_variance",
    "relative_error",
    "flag_gt_0.1",
    "mc_standard_error",
    "rejected_count",
    "degenerate",
)


def select_subset(n_total: int, n: int, seed: int) -> np.ndarray:
    """
    ``n`` distinct site indices out of ``n_total``, sorted ascending.

    Every site gets a key from the mix function; the ``n`` smallest keys
    win. Sampling is without replacement and depends only on
    (n_total, n, seed).
    """
    if not 1 <= n <= n_total:
        raise InputError(f"cannot draw {n} of {n_total} sites", "subset-too-large")
    key = np.uint64(derive_seed(seed, SUBSET_STREAM, n))
    sites = np.arange(1, n_total + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        keys = mix64(key ^ mix64(sites * GOLDEN_GAMMA))
    chosen = np.argsort(keys, kind="stable")[:n]
    return np.sort(chosen)


def _alpha_label(alpha: float) -> int:
    return int(np.array(alpha, dtype=np.float64).view(np.uint64))


# ── Grid ───────────────────────────────────────────────────────────
@dataclass(frozen=True)
class SweepCell:
    """One (alpha, N) comparison."""
    alpha: float
    n: int
    mc_variance: float
    formula_variance: float
    relative_error: float
    flag_gt_0_1: bool
    mc_standard_error: float
    rejected_count: int
    degenerate: bool

    def as_row(self) -> Dict[str, object]:
        return dict(zip(SWEEP_COLUMNS, astuple(self)))


def _parse_bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ValueError(f"expected true or false, got {text!r}")
    return text == "true"


_COLUMN_PARSERS = (float, int, float, float, float, _parse_bool, float, int, _parse_bool)


@dataclass(frozen=True)
class SweepGrid:
    """All cells of a sweep in (alpha, N) order."""
    cells: Tuple[SweepCell, ...]

    def rows(self) -> List[Dict[str, object]]:
        return [cell.as_row() for cell in self.cells]

    def to_csv(self, path: Union[str, Path]) -> None:
        write_table(self.rows(), SWEEP_COLUMNS, "csv", path)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "SweepGrid":
        """
        Read a grid written by ``to_csv``.

        Raises
        ------
        InputError
            When the header or a value does not match the sweep layout
        """
        kinds = _COLUMN_PARSERS
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != SWEEP_COLUMNS:
                raise InputError(f"{path}: not a sweep table (header {header})", "bad-header")
            cells = []
            for row in reader:
                if len(row) != len(kinds):
                    raise InputError(f"{path}:{reader.line_num}: expected {len(kinds)} columns",
                                     "parse-error")
                try:
                    cells.append(SweepCell(*(kind(text) for kind, text in zip(kinds, row))))
                except ValueError as exc:
                    raise InputError(f"{path}:{reader.line_num}: {exc}", "parse-error") from exc
        return cls(tuple(cells))


# ── Sweep ──────────────────────────────────────────────────────────
def relative_error_sweep(
    ef: EpochField,
    alphas: Sequence[float],
    ns: Sequence[int],
    members: int,
    seed: int,
    workers: int = 1,
) -> SweepGrid:
    """
    Compare the ensemble variance with the large-N snapshot formula.

    Parameters
    ----------
    ef : EpochField
        Field to draw site subsets from
    alphas : Sequence[float]
        Reporting probabilities
    ns : Sequence[int]
        Subset sizes, each at most ``ef.n``
    members : int
        Ensemble size per cell
    seed : int
        Root seed of subsets and ensembles
    workers : int
        Processes per ensemble; the grid does not depend on it

    Returns
    -------
    SweepGrid
        One cell per (alpha, N), alpha-major. A cell whose ensemble
        variance is exactly 0 (alpha = 1, or a constant subset) is marked
        degenerate with relative error 0.
    """
    if not alphas or not ns:
        raise InputError("sweep grids must be non-empty", "empty-grid")
    for n in ns:
        if n > ef.n:
            raise InputError(f"subset size {n} exceeds the field's {ef.n} sites",
                             "subset-too-large")
    models = [ReportingModel(alpha) for alpha in alphas]
    subsets = {n: ef.subset(select_subset(ef.n, n, seed)) for n in ns}

    cells = []
    for rm in models:
        for n in ns:
            sub = subsets[n]
            cell_seed = derive_seed(seed, CELL_STREAM, _alpha_label(rm.alpha), n)
            result = simulate_epoch_ensemble(sub, WeightVector.uniform(n), rm, members,
                                             cell_seed, workers)
            formula = variance_single_epoch_large_n(rm, sub).value
            mc = result.ensemble_variance
            degenerate = mc == 0.0
            error = 0.0 if degenerate else abs(mc - formula) / mc
            cells.append(SweepCell(
                alpha=rm.alpha,
                n=n,
                mc_variance=mc,
                formula_variance=formula,
                relative_error=error,
                flag_gt_0_1=error > ERROR_THRESHOLD,
                mc_standard_error=result.standard_error_of_variance,
                rejected_count=result.rejected_count,
                degenerate=degenerate,
            ))
            log.info("[cell] alpha=%s n=%d relative_error=%s",
                     format_value(rm.alpha), n, format_value(error))
    return SweepGrid(tuple(cells))
