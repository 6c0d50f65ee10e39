"""Deterministic seed derivation.

Sub-seeds are derived from a master seed and a tuple of indices through
numpy's SeedSequence, so adding runs or methods never perturbs the seeds of
earlier ones.
"""

from __future__ import annotations

import numpy as np


def derive_seed(master_seed: int, *parts: int) -> int:
    return int(np.random.SeedSequence((master_seed,) + parts).generate_state(1)[0])
