"""
Compensated reductions over sites and site pairs.

Every reduction goes through ``math.fsum`` so that sums of many small
weighted terms (and the cancellations that follow when alpha is close
to one) are correctly rounded.

Functions
---------
total(values) -> float
    Correctly rounded sum of an array of any shape
dot(x, y) -> float
    Correctly rounded inner product
diagonal_form(x, matrix) -> float
    sum_a x_a M_aa
offdiagonal_form(x, y, matrix) -> float
    sum_{a != b} x_a y_b M_ab
population_variance(values) -> float
    Spatial variance with the divide-by-N convention
"""
from __future__ import annotations

import math

import numpy as np

__all__ = [
    "total",
    "dot",
    "diagonal_form",
    "offdiagonal_form",
    "population_variance",
    "mean_and_variance",
]


def total(values) -> float:
    """Correctly rounded sum of every element of ``values``."""
    return math.fsum(np.asarray(values, dtype=np.float64).ravel().tolist())


def dot(x: np.ndarray, y: np.ndarray) -> float:
    """Correctly rounded sum of the elementwise products of ``x`` and ``y``."""
    return total(np.asarray(x, dtype=np.float64) * np.asarray(y, dtype=np.float64))


def diagonal_form(x: np.ndarray, matrix: np.ndarray) -> float:
    """Return sum_a x_a M_aa."""
    return dot(x, np.diagonal(matrix))


def offdiagonal_form(x: np.ndarray, y: np.ndarray, matrix: np.ndarray) -> float:
    """
    Return sum over ordered pairs a != b of x_a * y_b * M_ab.

    Parameters
    ----------
    x, y : np.ndarray
        Site vectors of length N
    matrix : np.ndarray
        N x N matrix

    Returns
    -------
    float
        The off-diagonal bilinear form, compensated over all N^2 terms
    """
    terms = np.outer(x, y) * matrix
    np.fill_diagonal(terms, 0.0)
    return total(terms)


def _shift(values: np.ndarray) -> float:
    # median of a constant array is that constant, bit for bit
    return float(np.median(values))


def population_variance(values: np.ndarray) -> float:
    """
    Spatial variance (1/N) sum (r_i - mean)^2.

    Evaluated on values shifted by their median, so a constant field
    yields exactly 0.
    """
    values = np.asarray(values, dtype=np.float64)
    dev = values - _shift(values)
    n = dev.size
    mean_dev = total(dev) / n
    return total((dev - mean_dev) ** 2) / n


def mean_and_variance(values: np.ndarray, ddof: int = 1) -> tuple[float, float]:
    """
    Mean and variance of a sample with compensated two-pass sums.

    Parameters
    ----------
    values : np.ndarray
        One-dimensional sample
    ddof : int
        Delta degrees of freedom for the variance denominator

    Returns
    -------
    tuple[float, float]
        (mean, variance). A sample whose members are all equal returns
        variance 0.0 exactly.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    if np.all(values == values[0]):
        return float(values[0]), 0.0
    shift = _shift(values)
    dev = values - shift
    mean_dev = total(dev) / n
    var = total((dev - mean_dev) ** 2) / (n - ddof)
    return shift + mean_dev, var
