"""
Exact integer combinatorics behind the uniform-weight moment formulas.

Stirling numbers of the second kind count the ways l reporting draws
fall into exactly m distinct sites; falling factorials count the ways
to pick those m sites in order. Everything here is exact Python
integer arithmetic; callers convert to float at the last moment.

Functions
---------
stirling2(l, m) -> int
    Partitions of l labelled items into m non-empty blocks
falling_factorial(n, m) -> int
    n (n-1) ... (n-m+1)
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

from .errors import DomainError

__all__ = ["STIRLING_CAP", "StirlingTable", "stirling_table", "stirling2", "falling_factorial"]


# ── Constants ──────────────────────────────────────────────────────
STIRLING_CAP = 25      # largest l served; the variance formulas need l <= 4


@dataclass(frozen=True)
class StirlingTable:
    """
    Triangle of Stirling numbers {l over m} for 1 <= m <= l <= max_l.

    Built once by the recurrence
    {l over m} = m {l-1 over m} + {l-1 over m-1}.

    Attributes
    ----------
    max_l : int
        Largest row held
    entries : tuple of tuples
        ``entries[l][m]`` for 0 <= m <= l; row 0 is ``(1,)``
    """
    max_l: int
    entries: Tuple[Tuple[int, ...], ...]

    @classmethod
    def build(cls, max_l: int) -> "StirlingTable":
        rows = [(1,)]
        for l in range(1, max_l + 1):
            prev = rows[-1]
            row = [0] * (l + 1)
            for m in range(1, l + 1):
                same = prev[m] if m < len(prev) else 0
                row[m] = m * same + prev[m - 1]
            rows.append(tuple(row))
        return cls(max_l=max_l, entries=tuple(rows))

    def __getitem__(self, index: Tuple[int, int]) -> int:
        l, m = index
        if m > l:
            return 0
        return self.entries[l][m]

    def row_sum(self, l: int) -> int:
        """Bell number B_l."""
        return sum(self.entries[l])


@lru_cache(maxsize=1)
def stirling_table() -> StirlingTable:
    """The shared table up to STIRLING_CAP."""
    return StirlingTable.build(STIRLING_CAP)


def stirling2(l: int, m: int) -> int:
    """
    Stirling number of the second kind {l over m}.

    Parameters
    ----------
    l : int
        Number of labelled items, 1 <= l <= STIRLING_CAP
    m : int
        Number of non-empty blocks, m >= 0

    Returns
    -------
    int
        Exact count; 0 when m = 0 or m > l

    Raises
    ------
    DomainError
        If l is outside [1, STIRLING_CAP] or m is negative
    """
    if l < 1 or l > STIRLING_CAP:
        raise DomainError(f"stirling2 needs 1 <= l <= {STIRLING_CAP}, got l={l}",
                          "stirling-cap")
    if m < 0:
        raise DomainError(f"stirling2 needs m >= 0, got m={m}", "negative-index")
    return stirling_table()[l, m]


def falling_factorial(n: int, m: int) -> int:
    """
    n (n-1) ... (n-m+1) as an iterated product; the empty product is 1.

    Raises
    ------
    DomainError
        Unless 0 <= m <= n
    """
    if m < 0 or n < 0 or m > n:
        raise DomainError(f"falling_factorial needs 0 <= m <= n, got n={n}, m={m}",
                          "falling-factorial-domain")
    product = 1
    for k in range(n - m + 1, n + 1):
        product *= k
    return product
