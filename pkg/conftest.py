"""Shared fixtures for the spatialvar test suite."""
from statistics import NormalDist

import numpy as np
import pytest

from spatialvar import FieldStats, WeightVector


def _quantile_lognormal(n, log_sd=1.0):
    z = [NormalDist().inv_cdf((i - 0.5) / n) for i in range(1, n + 1)]
    return np.exp(log_sd * np.array(z))


@pytest.fixture
def lognormal_values():
    """Factory: deterministic lognormal-shaped values exp(log_sd * z_i) at normal quantiles."""
    return _quantile_lognormal


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_case(rng):
    """Factory: (weights, field) with positive means and a PSD covariance."""

    def make(n, uniform=False, zero_mean=False):
        if uniform:
            w = WeightVector.uniform(n)
        else:
            raw = rng.uniform(0.1, 1.0, n)
            w = WeightVector(raw / raw.sum())
        mu = np.zeros(n) if zero_mean else rng.uniform(0.5, 1.5, n)
        a = rng.uniform(0.0, 1.0, (n, n))
        cov = a @ a.T / n + 0.5 * np.eye(n)
        return w, FieldStats.from_covariance(mu, cov)

    return make


@pytest.fixture
def write_csv(tmp_path):
    """Factory: write header + rows to a CSV file under tmp_path."""

    def write(name, header, rows):
        path = tmp_path / name
        lines = [",".join(header)] + [",".join(str(cell) for cell in row) for row in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return write
