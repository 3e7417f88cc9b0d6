"""
Plain-text table output.

Floats are written with ``repr`` (shortest text that reads back to the
same double), booleans as ``true``/``false``, so a table re-read from
disk compares equal to the rows that produced it.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, Mapping, Sequence, TextIO, Union

import numpy as np

from ..errors import InputError

__all__ = ["FORMATS", "format_value", "write_table", "render_table"]

FORMATS = ("csv", "jsonlines")

Destination = Union[None, str, Path, TextIO]


def _native(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, np.generic):
        return value.item()
    return value


def format_value(value) -> str:
    """Text of one table cell."""
    value = _native(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@contextmanager
def _opened(out: Destination) -> Iterator[TextIO]:
    if out is None:
        yield sys.stdout
    elif isinstance(out, (str, Path)):
        with open(out, "w", newline="", encoding="utf-8") as fh:
            yield fh
    else:
        yield out


def write_table(
    rows: Sequence[Mapping[str, object]],
    fieldnames: Sequence[str],
    fmt: str = "csv",
    out: Destination = None,
) -> None:
    """
    Write ``rows`` as CSV (with header) or as one JSON object per line.

    Parameters
    ----------
    rows : Sequence[Mapping[str, object]]
        Records keyed by ``fieldnames``
    fieldnames : Sequence[str]
        Column order
    fmt : str
        ``"csv"`` or ``"jsonlines"``
    out : None, path or text stream
        Destination; stdout when None
    """
    if fmt not in FORMATS:
        raise InputError(f"unknown output format {fmt!r}", "bad-format")
    with _opened(out) as fh:
        if fmt == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(fieldnames)
            for row in rows:
                writer.writerow([format_value(row[name]) for name in fieldnames])
        else:
            for row in rows:
                record: Dict[str, object] = {name: _native(row[name]) for name in fieldnames}
                fh.write(json.dumps(record) + "\n")


def render_table(rows: Sequence[Mapping[str, object]], fieldnames: Sequence[str],
                 fmt: str = "csv") -> str:
    """``write_table`` into a string."""
    buffer = io.StringIO()
    write_table(rows, fieldnames, fmt, buffer)
    return buffer.getvalue()
