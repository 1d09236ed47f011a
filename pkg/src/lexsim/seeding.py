"""Deterministic derivation of independent random streams.

Every random stream in a run is addressed by the master seed plus a tuple of
labels (condition key, repetition index, stream name). Labels are hashed with
SHA-256, so derivation does not depend on execution order, scheduling or
process boundaries, and is stable across sessions.
"""

from __future__ import annotations

import hashlib

import numpy as np

Label = int | float | str


def label_entropy(*labels: Label) -> list[int]:
    """Hash a label tuple into eight 32-bit entropy words."""
    h = hashlib.sha256()
    for label in labels:
        h.update(repr(label).encode("utf-8"))
        h.update(b"\x1e")
    digest = h.digest()
    return [int.from_bytes(digest[i : i + 4], "big") for i in range(0, 32, 4)]


def seed_for(master_seed: int, *labels: Label) -> np.random.SeedSequence:
    if master_seed < 0:
        raise ValueError(f"seed must be non-negative (got {master_seed})")
    return np.random.SeedSequence([master_seed, *label_entropy(*labels)])


def rng_for(master_seed: int, *labels: Label) -> np.random.Generator:
    """Random generator for (master seed, labels), independent of call order."""
    return np.random.default_rng(seed_for(master_seed, *labels))
