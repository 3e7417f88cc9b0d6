#!/usr/bin/env python3
"""
Command-line interface for spatialvar.

Every subcommand computes one table through the library and writes it
as CSV or JSON lines; the CLI itself adds no arithmetic.

Exit status: 0 on success, 1 on input errors (bad flags, unreadable or
malformed files), 2 on domain errors (alpha out of range, caps, N = 1
where pairs are needed, infeasible rejection). Errors print a single
``error=<kind> reason=<slug> message="..."`` line on stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .combinatorics import stirling2
from .convergence import convergence_report
from .errors import DomainError, InputError, SpatialVarError
from .estimators import (
    VarianceMethod,
    correction_terms,
    variance_alpha_near_one,
    variance_alpha_one,
    variance_large_N,
    variance_second_order,
    variance_single_epoch,
    variance_single_epoch_large_n,
    variance_uniform_second_order,
)
from .fields import EpochField, FieldAggregates, FieldStats, ReportingModel, WeightVector
from .moments import compute_moment_set
from .montecarlo import SweepGrid, relative_error_sweep, simulate_epoch_ensemble
from .montecarlo.sweep import SWEEP_COLUMNS
from .utils.grids import parse_alpha_grid, parse_n_grid
from .utils.ingest import ingest_epoch_csv, ingest_field_stats_csv, ingest_weights_csv
from .utils.synthetic import DEFAULT_SEED, DEFAULT_SITES, synthetic_rainfall
from .utils.tables import FORMATS, write_table

__all__ = ["RunConfig", "build_parser", "run", "main"]

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2

Table = Tuple[List[Dict[str, object]], Sequence[str]]

CORRECTION_COLUMNS = (
    "alpha", "n",
    "sq_inv_n", "sq_inv_n2",
    "cross_inv_n", "cross_inv_n2",
    "mean_inv_n", "mean_inv_n2",
)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as InputError."""

    def error(self, message: str):
        raise InputError(message, "usage")


# ── Configuration ──────────────────────────────────────────────────
@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs, validated once."""
    command: str
    alpha: Optional[float] = None
    alphas: Tuple[float, ...] = ()
    n: Optional[int] = None
    ns: Tuple[int, ...] = ()
    l: Optional[int] = None
    m: Optional[int] = None
    mode: Optional[str] = None
    members: int = 20_000
    seed: int = DEFAULT_SEED
    field: Optional[Path] = None
    mu: Optional[Path] = None
    second: Optional[Path] = None
    weights: Optional[Path] = None
    workers: int = 1
    out: Optional[Path] = None
    fmt: str = "csv"
    verbose: bool = False
    quiet: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        def opt(name, default=None):
            return getattr(args, name, default)

        def path(name):
            value = opt(name)
            return Path(value) if value is not None else None

        alphas = parse_alpha_grid(args.alphas) if opt("alphas") else ()
        ns = parse_n_grid(args.ns) if opt("ns") else ()
        if opt("mu") is not None and opt("second") is None or \
                opt("second") is not None and opt("mu") is None:
            raise InputError("--mu and --second go together", "usage")
        if opt("workers", 1) < 1:
            raise InputError("--workers must be at least 1", "usage")
        return cls(
            command=args.command,
            alpha=opt("alpha"),
            alphas=alphas,
            n=opt("n"),
            ns=ns,
            l=opt("l"),
            m=opt("m"),
            mode=opt("mode"),
            members=opt("members", 20_000),
            seed=opt("seed", DEFAULT_SEED),
            field=path("field"),
            mu=path("mu"),
            second=path("second"),
            weights=path("weights"),
            workers=opt("workers", 1),
            out=path("out"),
            fmt=args.format,
            verbose=args.verbose,
            quiet=args.quiet,
        )


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    common = _Parser(add_help=False)
    common.add_argument("--out", help="Output file (default: stdout)")
    common.add_argument("--format", default="csv", choices=FORMATS, help="Table format")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")

    parser = _Parser(
        prog="spatialvar",
        description="Variance of spatial means of fields with missing reports",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Stirling number {4 over 2}
  spatialvar stirling --l 4 --m 2

  # Large-N snapshot variance of a field
  spatialvar variance --mode epoch-large-n --alpha 0.5 --field field.csv

  # Monte-Carlo vs formula over an (alpha, N) grid
  spatialvar sweep --alphas 0.1:0.9:0.1 --ns 10,30,100,300 --members 20000 --seed 42
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def field_inputs(p, required_field=False):
        p.add_argument("--field", required=required_field, help="Snapshot CSV (site_id,value)")
        if not required_field:
            p.add_argument("--mu", help="Mean CSV (site_id,mu)")
            p.add_argument("--second", help="Second-moment CSV (dense or i,j,value)")
        p.add_argument("--weights", help="Weights CSV (site_id,weight); equal weights if absent")

    p = sub.add_parser("stirling", parents=[common], help="Stirling numbers of the second kind")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--m", type=int, help="Single entry; the whole row when absent")

    p = sub.add_parser("moments", parents=[common], help="Mixed moments of R and S")
    p.add_argument("--alpha", type=float, required=True)
    field_inputs(p)

    p = sub.add_parser("variance", parents=[common], help="Variance of the spatial mean")
    p.add_argument("--mode", required=True, choices=[m.value for m in VarianceMethod])
    p.add_argument("--alpha", type=float, required=True)
    field_inputs(p)

    p = sub.add_parser("check", parents=[common], help="Convergence diagnostics")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--weights")

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo ensemble of one snapshot")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--members", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)
    field_inputs(p, required_field=True)

    p = sub.add_parser("sweep", parents=[common], help="Monte-Carlo vs large-N formula grid")
    p.add_argument("--field", help="Snapshot CSV; the synthetic field when absent")
    p.add_argument("--alphas", required=True)
    p.add_argument("--ns", required=True)
    p.add_argument("--members", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("corrections", parents=[common], help="Finite-N correction terms")
    p.add_argument("--alphas", required=True)
    p.add_argument("--ns", required=True)

    p = sub.add_parser("synth", parents=[common], help="Write the synthetic field as CSV")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--n", type=int, default=DEFAULT_SITES)
    return parser


# ── Inputs ─────────────────────────────────────────────────────────
def _epoch(config: RunConfig) -> EpochField:
    if config.field is None:
        raise InputError(f"{config.command} needs --field", "missing-input")
    return ingest_epoch_csv(config.field)


def _field_stats(config: RunConfig) -> Tuple[FieldStats, FieldAggregates]:
    if config.field is not None:
        ef = ingest_epoch_csv(config.field)
        return FieldStats.from_epoch(ef), FieldAggregates.from_epoch(ef)
    if config.mu is not None:
        f = ingest_field_stats_csv(config.mu, config.second)
        return f, FieldAggregates.from_field_stats(f)
    raise InputError(f"{config.command} needs --field or --mu with --second", "missing-input")


def _weights(config: RunConfig, n: int) -> WeightVector:
    if config.weights is None:
        return WeightVector.uniform(n)
    return ingest_weights_csv(config.weights, n)


def _equal_weights(config: RunConfig, n: int) -> None:
    if config.weights is not None and not _weights(config, n).is_uniform:
        raise InputError(f"mode {config.mode} assumes equal weights", "weights-unsupported")


# ── Subcommands ────────────────────────────────────────────────────
def _stirling(config: RunConfig) -> Table:
    ms = [config.m] if config.m is not None else range(1, config.l + 1)
    rows = [{"l": config.l, "m": m, "value": stirling2(config.l, m)} for m in ms]
    return rows, ("l", "m", "value")


def _moments(config: RunConfig) -> Table:
    f, _ = _field_stats(config)
    ms = compute_moment_set(_weights(config, f.n), ReportingModel(config.alpha), f)
    return ms.as_rows(), ("moment", "value")


def _variance(config: RunConfig) -> Table:
    rm = ReportingModel(config.alpha)
    mode = VarianceMethod(config.mode)
    if mode in (VarianceMethod.EPOCH, VarianceMethod.EPOCH_LARGE_N):
        ef = _epoch(config)
        _equal_weights(config, ef.n)
        estimator = variance_single_epoch if mode is VarianceMethod.EPOCH \
            else variance_single_epoch_large_n
        estimate = estimator(rm, ef)
    else:
        f, agg = _field_stats(config)
        if mode is VarianceMethod.SECOND_ORDER:
            estimate = variance_second_order(compute_moment_set(_weights(config, f.n), rm, f))
        elif mode is VarianceMethod.LARGE_N:
            estimate = variance_large_N(rm, _weights(config, f.n), f)
        elif mode is VarianceMethod.ALPHA_ONE:
            estimate = variance_alpha_one(_weights(config, f.n), f)
        elif mode is VarianceMethod.UNIFORM_SECOND_ORDER:
            _equal_weights(config, f.n)
            estimate = variance_uniform_second_order(f.n, rm, agg)
        else:
            _equal_weights(config, f.n)
            estimate = variance_alpha_near_one(f.n, rm, agg)
    return [estimate.as_row()], ("method", "value", "negative")


def _check(config: RunConfig) -> Table:
    rm = ReportingModel(config.alpha)
    if config.weights is not None:
        w = ingest_weights_csv(config.weights)
    elif config.n is not None:
        w = WeightVector.uniform(config.n)
    else:
        raise InputError("check needs --n or --weights", "missing-input")
    row = convergence_report(w, rm).as_row()
    return [row], tuple(row)


def _simulate(config: RunConfig) -> Table:
    ef = _epoch(config)
    result = simulate_epoch_ensemble(ef, _weights(config, ef.n), ReportingModel(config.alpha),
                                     config.members, config.seed, config.workers)
    row = result.as_row()
    return [row], tuple(row)


def _sweep(config: RunConfig) -> Table:
    ef = ingest_epoch_csv(config.field) if config.field is not None else synthetic_rainfall()
    grid: SweepGrid = relative_error_sweep(ef, config.alphas, config.ns, config.members,
                                           config.seed, config.workers)
    return grid.rows(), SWEEP_COLUMNS


def _corrections(config: RunConfig) -> Table:
    rows = []
    for alpha in config.alphas:
        rm = ReportingModel(alpha)
        for n in config.ns:
            terms = [t for bracket in correction_terms(n, rm) for t in bracket]
            rows.append(dict(zip(CORRECTION_COLUMNS, [alpha, n] + terms)))
    return rows, CORRECTION_COLUMNS


def _synth(config: RunConfig) -> Table:
    ef = synthetic_rainfall(config.n, config.seed)
    rows = [{"site_id": i, "value": float(v)} for i, v in enumerate(ef.values)]
    return rows, ("site_id", "value")


COMMANDS: Dict[str, Callable[[RunConfig], Table]] = {
    "stirling": _stirling,
    "moments": _moments,
    "variance": _variance,
    "check": _check,
    "simulate": _simulate,
    "sweep": _sweep,
    "corrections": _corrections,
    "synth": _synth,
}


# ── Entry points ───────────────────────────────────────────────────
def run(config: RunConfig) -> int:
    """
    Execute one subcommand and write its table.

    Returns
    -------
    int
        Exit status (0, 1 or 2)
    """
    try:
        rows, columns = COMMANDS[config.command](config)
        log.debug("%s produced %d row(s)", config.command, len(rows))
        write_table(rows, columns, config.fmt, config.out)
    except DomainError as exc:
        print(exc.one_line(), file=sys.stderr)
        return EXIT_DOMAIN
    except SpatialVarError as exc:
        print(exc.one_line(), file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(InputError(f"cannot read input: {exc}", "io-error").one_line(), file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def _configure_logging(config: RunConfig) -> None:
    level = logging.DEBUG if config.verbose else logging.WARNING if config.quiet else logging.INFO
    logging.basicConfig(level=level, format="[%(levelname)s] %(message)s", stream=sys.stderr)
    logging.getLogger().setLevel(level)
    logging.captureWarnings(True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI entry point."""
    try:
        config = RunConfig.from_args(build_parser().parse_args(argv))
    except SpatialVarError as exc:
        print(exc.one_line(), file=sys.stderr)
        return EXIT_DOMAIN if isinstance(exc, DomainError) else EXIT_INPUT
    _configure_logging(config)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
