"""Deterministic seed derivation for parallel tasks."""
import hashlib

import numpy as np


def derive_seed(master_seed: int, *keys) -> int:
    """
    Derive a per-task seed from a master seed and a task key.

    The same (master_seed, keys) always gives the same seed, whatever the
    order or process in which tasks run.

    Args:
        master_seed: Seed of the whole run
        keys: Task identifiers (index, tag, d, ...)

    Returns:
        Non-negative 64-bit integer seed
    """
    name = ":".join([str(master_seed), *(str(k) for k in keys)])
    digest = hashlib.sha256(name.encode()).digest()
    return int.from_bytes(digest[:8], "big")


def task_rng(master_seed: int, *keys) -> np.random.Generator:
    """Random generator for one task."""
    return np.random.default_rng(derive_seed(master_seed, *keys))
