"""Canonical model builders shared by tests, demos and the CLI docs."""

from __future__ import annotations

import numpy as np

from .gasket import enumerate_vertices
from .model import DataSet, FifModel, ProductVertex, ScalingField, build_model


def zero_dataset(n: int = 1) -> DataSet:
    return DataSet.zeros(n)


def bump_dataset(n: int = 1, height: float = 0.5) -> DataSet:
    """Zero everywhere except a single interior vertex pair.

    For n = 1 the nonzero vertex is (1@2, 1@2), the midpoint pair of the
    first cells."""
    entries = dict(DataSet.zeros(n).entries)
    verts = enumerate_vertices(n)
    interior = [a for a in verts if a.word]
    key = ProductVertex(interior[0], interior[0])
    entries[key] = float(height)
    return DataSet(n, entries)


def random_dataset(n: int, seed: int, scale: float = 1.0) -> DataSet:
    """Zero on the boundary, uniform random values at interior vertices."""
    rng = np.random.default_rng(seed)
    entries = {}
    verts = enumerate_vertices(n)
    for a in verts:
        for b in verts:
            if a.word and b.word:
                z = float(rng.uniform(-scale, scale))
            else:
                z = 0.0
            entries[ProductVertex(a, b)] = z
    return DataSet(n, entries)


def reference_model(alpha: float = 0.3, n: int = 1, height: float = 0.5) -> FifModel:
    """Single-bump data with a constant scaling factor."""
    return build_model(bump_dataset(n, height), ScalingField.constant(alpha, n))


def zero_model(alpha: float = 0.3, n: int = 1) -> FifModel:
    return build_model(zero_dataset(n), ScalingField.constant(alpha, n))


def random_model(n: int, seed: int, alpha: float = 0.3) -> FifModel:
    return build_model(random_dataset(n, seed), ScalingField.constant(alpha, n))
