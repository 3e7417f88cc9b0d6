"""
Grid syntax for sweeps: ``start:stop:step`` or a comma list.

Ranges include the stop value when it is reached within 1e-12; float
grid values are rounded to 12 decimals so ``0.1:0.9:0.1`` yields
0.1, 0.2, ..., 0.9 rather than 0.30000000000000004.
"""
from __future__ import annotations

import math
from typing import Callable, Tuple

from ..errors import DomainError, InputError

__all__ = ["parse_alpha_grid", "parse_n_grid"]

GRID_TOLERANCE = 1e-12
GRID_DECIMALS  = 12


def _split(text: str, convert: Callable[[str], float]):
    parts = [part.strip() for part in text.split(",")]
    if not text.strip() or any(not part for part in parts):
        raise InputError(f"empty entry in grid {text!r}", "bad-grid")
    try:
        return [convert(part) for part in parts]
    except ValueError as exc:
        raise InputError(f"cannot parse grid {text!r}: {exc}", "bad-grid") from exc


def _range(text: str, convert: Callable[[str], float]):
    bounds = _split(text.replace(":", ","), convert)
    if len(bounds) != 3:
        raise InputError(f"range grid needs start:stop:step, got {text!r}", "bad-grid")
    start, stop, step = bounds
    if not step > 0 or stop < start:
        raise InputError(f"range {text!r} must have step > 0 and stop >= start", "bad-grid")
    count = math.floor((stop - start) / step)
    if start + (count + 1) * step <= stop + GRID_TOLERANCE:
        count += 1
    return [start + k * step for k in range(count + 1)]


def _parse(text: str, convert: Callable[[str], float]) -> list:
    values = _range(text, convert) if ":" in text else _split(text, convert)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InputError(f"grid {text!r} is not strictly increasing", "bad-grid")
    return values


def parse_alpha_grid(text: str) -> Tuple[float, ...]:
    """
    Reporting probabilities from grid text.

    Raises
    ------
    InputError
        On syntax errors or a grid that is not strictly increasing
    DomainError
        When a value falls outside (0, 1]
    """
    values = tuple(round(v, GRID_DECIMALS) for v in _parse(text, float))
    for value in values:
        if not (math.isfinite(value) and 0.0 < value <= 1.0):
            raise DomainError(f"alpha grid value {value!r} is outside (0, 1]",
                              "alpha-out-of-range")
    return values


def parse_n_grid(text: str) -> Tuple[int, ...]:
    """Site counts from grid text; every value must be at least 1."""
    values = tuple(_parse(text, int))
    if values[0] < 1:
        raise InputError(f"site counts must be >= 1, got {values[0]}", "bad-grid")
    return values
