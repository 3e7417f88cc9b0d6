"""Monte-Carlo ensembles, exhaustive mask enumeration and the (alpha, N) sweep."""

from . import streams, ensemble, enumeration, sweep
from .streams import bernoulli_masks, derive_seed, mix64
from .ensemble import (
    EnsembleResult,
    MaskEnsemble,
    jackknife_variance_error,
    simulate_epoch_ensemble,
)
from .enumeration import (
    exact_enumeration_epoch,
    exact_enumeration_field,
    exact_moment_enumeration,
)
from .sweep import SweepCell, SweepGrid, relative_error_sweep, select_subset

__all__ = [
    "streams", "ensemble", "enumeration", "sweep",
    "bernoulli_masks", "derive_seed", "mix64",
    "EnsembleResult", "MaskEnsemble", "jackknife_variance_error", "simulate_epoch_ensemble",
    "exact_enumeration_epoch", "exact_enumeration_field", "exact_moment_enumeration",
    "SweepCell", "SweepGrid", "relative_error_sweep", "select_subset",
]
