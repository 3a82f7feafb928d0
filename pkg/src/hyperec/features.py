"""Structural features of a candidate clique inside a projected graph.

Two extractors are provided.  ``count_features`` gives eight interpretable
count statistics.  ``motif_features`` counts clique motifs: small
configurations of one or two nodes of the candidate together with one or two
maximal cliques holding those nodes.  The thirteen motif types are

====  =====  =======  ===============================================
type  nodes  cliques  configuration
====  =====  =======  ===============================================
1     v      M        v in M
2     v      M1, M2   v in both, M1 & M2 == {v}
3     v      M1, M2   v in both, M1 & M2 larger than {v}
4     u, v   M        both in M
5     u, v   M        exactly one of u, v in M
6     u, v   M1, M2   both in both, M1 & M2 == {u, v}
7     u, v   M1, M2   both in both, M1 & M2 larger than {u, v}
8     u, v   M1, M2   both in one clique, one of them in the other,
                      overlap is exactly that node
9     u, v   M1, M2   as 8 but the overlap is larger
10    u, v   M1, M2   the same single node in each clique, overlap is
                      exactly that node
11    u, v   M1, M2   as 10 but the overlap is larger
12    u, v   M1, M2   u only in one clique, v only in the other,
                      cliques overlap
13    u, v   M1, M2   as 12 but the cliques are disjoint
====  =====  =======  ===============================================

Per-node types yield one count per node of the candidate, per-pair types one
count per node pair; each count array is summarized as
``[mean, std, min, max]``.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .core import Graph, MaximalCliqueSet

COUNT_SCHEMA = (
    "size",
    "mean_degree",
    "mean_neighbor_degree",
    "mean_node_clique_degree",
    "mean_pair_clique_degree",
    "all_pairs_multi_clique",
    "mean_clustering",
    "mean_encompassing_clique_size",
)
NDP_SCHEMA = ("ndp_min_degree", "ndp_mean_degree")
N_MOTIFS = 13
MOTIF_SCHEMA = tuple(f"motif{i}_{s}" for i in range(1, N_MOTIFS + 1) for s in ("mean", "std", "min", "max"))


def summarize(p: Iterable[float]) -> np.ndarray:
    """[mean, population std, min, max]; zeros for an empty array."""
    a = np.asarray(list(p), dtype=float)
    if a.size == 0:
        return np.zeros(4)
    return np.array([a.mean(), a.std(), a.min(), a.max()])


class StructuralIndex:
    """Per-node statistics of a graph and its maximal cliques, computed once."""

    def __init__(self, g: Graph, cliques: MaximalCliqueSet):
        self.g = g
        self.cliques = cliques

    @cached_property
    def degree(self) -> dict:
        return {v: len(nb) for v, nb in self.g.adj.items()}

    @cached_property
    def neighbor_degree(self) -> dict:
        deg = self.degree
        return {v: (sum(deg[u] for u in nb) / len(nb) if nb else 0.0) for v, nb in self.g.adj.items()}

    @cached_property
    def clustering(self) -> dict:
        adj = self.g.adj
        out = {}
        for v, nb in adj.items():
            d = len(nb)
            if d < 2:
                out[v] = 0.0
                continue
            links = sum(len(adj[u] & nb) for u in nb) // 2
            out[v] = links / (d * (d - 1) / 2)
        return out

    @cached_property
    def clique_sets(self) -> tuple:
        return self.cliques.cliques

    def node_cliques(self, v: int) -> tuple:
        return self.cliques.node_index.get(v, ())


def count_features(c: Iterable[int], g: Graph, cliques: MaximalCliqueSet,
                   index: StructuralIndex | None = None) -> np.ndarray:
    nodes = sorted(c)
    if not nodes:
        raise ValueError("empty clique")
    idx = index or StructuralIndex(g, cliques)
    size = len(nodes)
    node_cl = [set(idx.node_cliques(v)) for v in nodes]
    pair_counts = [len(node_cl[i] & node_cl[j]) for i, j in combinations(range(size), 2)]
    encompassing = set.intersection(*node_cl) if node_cl else set()
    if not encompassing:
        raise ValueError(f"{nodes} is not contained in any maximal clique")
    return np.array([
        size,
        np.mean([idx.degree[v] for v in nodes]),
        np.mean([idx.neighbor_degree[v] for v in nodes]),
        np.mean([len(s) for s in node_cl]),
        np.mean(pair_counts) if pair_counts else 0.0,
        float(all(x > 1 for x in pair_counts)),
        np.mean([idx.clustering[v] for v in nodes]),
        np.mean([len(idx.clique_sets[i]) for i in encompassing]),
    ], dtype=float)


def _node_motif_counts(v: int, idx: StructuralIndex) -> tuple[int, int, int]:
    mine = idx.node_cliques(v)
    cs = idx.clique_sets
    t2 = t3 = 0
    for a, b in combinations(mine, 2):
        if len(cs[a] & cs[b]) == 1:
            t2 += 1
        else:
            t3 += 1
    return len(mine), t2, t3


def _pair_motif_counts(u: int, v: int, idx: StructuralIndex) -> list[int]:
    cs = idx.clique_sets
    cu = set(idx.node_cliques(u))
    cv = set(idx.node_cliques(v))
    both = sorted(cu & cv)
    only_u = sorted(cu - cv)
    only_v = sorted(cv - cu)
    counts = [0] * 10  # types 4..13
    counts[0] = len(both)
    counts[1] = len(only_u) + len(only_v)
    for a, b in combinations(both, 2):
        counts[2 if len(cs[a] & cs[b]) == 2 else 3] += 1
    for a in both:
        for b in only_u + only_v:
            counts[4 if len(cs[a] & cs[b]) == 1 else 5] += 1
    for group in (only_u, only_v):
        for a, b in combinations(group, 2):
            counts[6 if len(cs[a] & cs[b]) == 1 else 7] += 1
    for a in only_u:
        sa = cs[a]
        for b in only_v:
            counts[8 if sa & cs[b] else 9] += 1
    return counts


def motif_features(c: Iterable[int], g: Graph, cliques: MaximalCliqueSet,
                   index: StructuralIndex | None = None) -> np.ndarray:
    nodes = sorted(c)
    idx = index or StructuralIndex(g, cliques)
    per_node = np.array([_node_motif_counts(v, idx) for v in nodes], dtype=float).reshape(-1, 3)
    per_pair = np.array([_pair_motif_counts(a, b, idx) for a, b in combinations(nodes, 2)],
                        dtype=float).reshape(-1, 10)
    parts = [summarize(per_node[:, i]) for i in range(3)]
    parts += [summarize(per_pair[:, i]) for i in range(10)]
    return np.concatenate(parts)


def ndp_degree_features(c: Iterable[int], true_degrees: Mapping[int, float]) -> np.ndarray:
    vals = []
    for v in c:
        if v not in true_degrees:
            raise KeyError(f"node {v} missing from degree map")
        vals.append(float(true_degrees[v]))
    if not vals:
        raise ValueError("empty clique")
    return np.array([min(vals), sum(vals) / len(vals)])


def feature_schema(mode: str = "count", ndp: bool = False) -> tuple[str, ...]:
    if mode == "count":
        base = COUNT_SCHEMA
    elif mode == "motif":
        base = MOTIF_SCHEMA
    else:
        raise ValueError(f"unknown feature mode {mode!r}")
    return base + (NDP_SCHEMA if ndp else ())


def extract_features(candidates: Iterable[Iterable[int]], g: Graph, cliques: MaximalCliqueSet,
                     mode: str = "count", true_degrees: Mapping[int, float] | None = None) -> np.ndarray:
    """Feature matrix, one row per candidate, columns per ``feature_schema``."""
    fn = {"count": count_features, "motif": motif_features}.get(mode)
    if fn is None:
        raise ValueError(f"unknown feature mode {mode!r}")
    idx = StructuralIndex(g, cliques)
    rows = []
    for c in candidates:
        row = fn(c, g, cliques, idx)
        if true_degrees is not None:
            row = np.concatenate([row, ndp_degree_features(c, true_degrees)])
        rows.append(row)
    width = len(feature_schema(mode, true_degrees is not None))
    return np.array(rows, dtype=float).reshape(-1, width)


def features_to_csv(X: np.ndarray, schema: Iterable[str]) -> str:
    lines = [",".join(schema)]
    lines += [",".join(repr(float(x)) for x in row) for row in X]
    return "\n".join(lines) + "\n"
