"""Object pool and per-interaction contexts.

Objects live in the unit cube [0, 1]^d (d=3 by default), one coordinate per
continuous feature. A context is a small set of distinct objects drawn from
the pool for a single interaction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Object:
    """One referent: an index into the world pool plus its feature vector."""

    id: int
    features: np.ndarray = field(compare=False)


@dataclass(frozen=True)
class World:
    objects: tuple[Object, ...]
    features: np.ndarray  # (n, dims), row i belongs to objects[i]
    dims: int

    def __len__(self) -> int:
        return len(self.objects)


@dataclass(frozen=True)
class Context:
    """Objects visible in one interaction. Members are distinct by id."""

    objects: tuple[Object, ...]
    ids: np.ndarray  # (m,)
    features: np.ndarray  # (m, dims)

    def __post_init__(self) -> None:
        if len(self.objects) == 0:
            raise ValueError("context must contain at least one object")
        if len(set(o.id for o in self.objects)) != len(self.objects):
            raise ValueError("context objects must be distinct by id")

    def __len__(self) -> int:
        return len(self.objects)

    @classmethod
    def of(cls, objects) -> "Context":
        """Build a context directly from objects (mainly for tests/tools)."""
        objects = tuple(objects)
        ids = np.array([o.id for o in objects], dtype=np.int64)
        features = np.array([o.features for o in objects], dtype=np.float64)
        return cls(objects, ids, features)


def generate_world(n: int, d: int, rng: np.random.Generator) -> World:
    """Create n objects with coordinates i.i.d. uniform on [0, 1]."""
    if n < 1:
        raise ValueError(f"world size must be >= 1 (got {n})")
    if d < 1:
        raise ValueError(f"dims must be >= 1 (got {d})")
    features = rng.random((n, d))
    features.setflags(write=False)
    objects = tuple(Object(i, features[i]) for i in range(n))
    return World(objects, features, d)


def sample_context(world: World, m: int, rng: np.random.Generator) -> Context:
    """Draw m distinct objects uniformly without replacement from the pool."""
    n = len(world)
    if m < 2:
        raise ValueError(f"context size must be >= 2 (got {m})")
    if m >= n:
        raise ValueError(f"context size must be smaller than world size (got {m} >= {n})")
    idx = rng.choice(n, size=m, replace=False)
    objects = tuple(world.objects[i] for i in idx)
    return Context(objects, idx.astype(np.int64), world.features[idx])
