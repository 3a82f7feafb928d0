"""Input coercion helpers shared by the estimators."""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .core import Graph, Hypergraph, project


def check_hypergraph(h) -> Hypergraph:
    """Accept a Hypergraph or any iterable of node iterables."""
    if isinstance(h, Hypergraph):
        return h
    if isinstance(h, (str, bytes)):
        raise TypeError("expected a hypergraph, got a string")
    try:
        return Hypergraph.from_edges(h)
    except TypeError as exc:
        raise TypeError(f"cannot interpret {type(h).__name__} as a hypergraph") from exc


def check_graph(g) -> Graph:
    """Accept a Graph, a Hypergraph (projected), or an iterable of node pairs."""
    if isinstance(g, Graph):
        return g
    if isinstance(g, Hypergraph):
        return project(g)
    return Graph.from_edges(g)


def check_feature_matrix(X, n_features: int | None = None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D feature matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature matrix contains NaN or infinite values")
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} features, got {X.shape[1]}")
    return X


def check_binary_labels(y: Iterable, n: int) -> np.ndarray:
    y = np.asarray(y).ravel()
    if len(y) != n:
        raise ValueError(f"got {len(y)} labels for {n} rows")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    return y.astype(np.int64)
