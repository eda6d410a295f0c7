"""Deterministic random streams keyed by integer tuples."""

import numpy as np


def make_rng(*keys) -> np.random.Generator:
    """Independent Philox stream for the key tuple, e.g. ``(seed, n_index, replicate)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(k) for k in keys])))
