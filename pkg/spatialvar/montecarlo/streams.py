"""
Counter-based Bernoulli reporting masks.

Every draw is a pure function of (seed, member, attempt, site): no
generator state is carried between members, so any member can be
regenerated on its own and the order in which workers visit members
cannot change a single bit.

Mix function
------------
splitmix64 finalizer on uint64 (wrapping arithmetic):

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

Key schedule
------------
    base      = mix(seed + G)
    member    = mix(base ^ mix((member + 1) * G))
    attempt   = mix(member ^ (attempt + 1) * A)
    draw      = mix(attempt + (site + 1) * G)
    uniform   = (draw >> 11) * 2^-53            in [0, 1)
    reports   = uniform < alpha

with G = 0x9E3779B97F4A7C15 and A = 0xD1B54A32D192ED03. This schedule
is part of the reproducibility contract and does not change between
versions.
"""
from __future__ import annotations

from typing import Union

import numpy as np

__all__ = [
    "GOLDEN_GAMMA",
    "mix64",
    "seed_key",
    "derive_seed",
    "member_keys",
    "uniform_draws",
    "bernoulli_masks",
]


# ── Constants ──────────────────────────────────────────────────────
GOLDEN_GAMMA  = np.uint64(0x9E3779B97F4A7C15)
ATTEMPT_GAMMA = np.uint64(0xD1B54A32D192ED03)
_MIX_1        = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2        = np.uint64(0x94D049BB133111EB)
_ONE          = np.uint64(1)
_MASK64       = (1 << 64) - 1
_UNIT         = 2.0 ** -53


def mix64(z) -> np.ndarray:
    """splitmix64 finalizer, elementwise on uint64."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX_1
        z = (z ^ (z >> np.uint64(27))) * _MIX_2
        return z ^ (z >> np.uint64(31))


def seed_key(seed: int) -> np.uint64:
    """Base key of a 64-bit seed (negative or oversized seeds wrap)."""
    with np.errstate(over="ignore"):
        return np.uint64(mix64(np.uint64(int(seed) & _MASK64) + GOLDEN_GAMMA))


def derive_seed(seed: int, *counters: int) -> int:
    """
    Child seed for a labelled sub-stream, e.g. one sweep cell.

    Parameters
    ----------
    seed : int
        Parent seed
    *counters : int
        Labels; any non-negative integers below 2^64

    Returns
    -------
    int
        A new 64-bit seed
    """
    key = seed_key(seed)
    with np.errstate(over="ignore"):
        for counter in counters:
            key = np.uint64(mix64(key ^ mix64(np.uint64(int(counter) & _MASK64) + GOLDEN_GAMMA)))
    return int(key)


def member_keys(seed: int, members: np.ndarray) -> np.ndarray:
    """Per-member keys for an array of member indices."""
    members = np.asarray(members, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(seed_key(seed) ^ mix64((members + _ONE) * GOLDEN_GAMMA))


def uniform_draws(seed: int, members: np.ndarray, n_sites: int,
                  attempt: Union[int, np.ndarray] = 0) -> np.ndarray:
    """
    Uniform [0, 1) draws, one row per member and one column per site.

    ``attempt`` is a scalar or one value per member; redrawing a
    rejected member bumps its attempt counter.
    """
    keys = member_keys(seed, members)
    attempt = np.broadcast_to(np.asarray(attempt, dtype=np.uint64), keys.shape)
    sites = np.arange(1, n_sites + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        keys = mix64(keys ^ ((attempt + _ONE) * ATTEMPT_GAMMA))
        draws = mix64(keys[:, None] + sites[None, :] * GOLDEN_GAMMA)
    return (draws >> np.uint64(11)).astype(np.float64) * _UNIT


def bernoulli_masks(seed: int, members: np.ndarray, n_sites: int, alpha: float,
                    attempt: Union[int, np.ndarray] = 0) -> np.ndarray:
    """
    Unconditional reporting masks: True where a site reports.

    Returns
    -------
    np.ndarray
        Boolean array of shape (len(members), n_sites)
    """
    return uniform_draws(seed, members, n_sites, attempt) < alpha
