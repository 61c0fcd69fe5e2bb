"""Deterministic generators for small test graphs."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import GenerationFailed, InvalidGraph
from .graphs import WeightedGraph, is_connected

FAMILIES = ("path", "cycle", "star", "complete", "random-tree", "gnp")
GNP_RETRIES = 100


def _weights(pairs, weights, rng):
    if weights == "unit":
        return [(i, j, 1) for i, j in pairs]
    if weights == "random":
        return [(i, j, Fraction(int(rng.integers(1, 1001)), 1000)) for i, j in pairs]
    raise ValueError(f"unknown weight mode {weights!r}")


def _pairs(family, n, p, rng):
    if family == "path":
        return [(k, k + 1) for k in range(1, n)]
    if family == "cycle":
        if n < 3:
            raise InvalidGraph("a cycle needs n >= 3")
        return [(k, k + 1) for k in range(1, n)] + [(1, n)]
    if family == "star":
        return [(1, k) for k in range(2, n + 1)]
    if family == "complete":
        return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if family == "random-tree":
        label = rng.permutation(n) + 1
        return [(int(label[int(rng.integers(0, v))]), int(label[v])) for v in range(1, n)]
    raise ValueError(f"unknown family {family!r}")


def generate(family: str, n: int, p: float = None, seed: int = 0, weights: str = "unit") -> WeightedGraph:
    """Graph of the given family on ``n`` nodes; identical output for identical arguments."""
    if n < 1:
        raise InvalidGraph("n must be >= 1")
    rng = np.random.default_rng(seed)
    if family == "gnp":
        if p is None or not 0 < p <= 1:
            raise InvalidGraph("gnp needs --p in (0, 1]")
        for _ in range(GNP_RETRIES):
            pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < p]
            g = WeightedGraph.from_edges(n, [(i, j, 1) for i, j in pairs])
            if is_connected(g):
                return WeightedGraph.from_edges(n, _weights(pairs, weights, rng))
        raise GenerationFailed(f"no connected G({n}, {p}) sample in {GNP_RETRIES} attempts")
    return WeightedGraph.from_edges(n, _weights(_pairs(family, n, p, rng), weights, rng))
