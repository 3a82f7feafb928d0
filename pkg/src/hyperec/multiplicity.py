"""Weighted projections and the unsupervised edge-multiplicity reconstruction."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .core import (DEFAULT_CLIQUE_CAP, Graph, Hypergraph, cliques_containing,
                   enumerate_maximal_cliques)


@dataclass(frozen=True)
class WeightedGraph:
    nodes: frozenset
    weights: dict  # frozenset({u, v}) -> int or Fraction

    def graph(self) -> Graph:
        return Graph.from_edges((tuple(e) for e, w in self.weights.items() if w > 0), self.nodes)

    def weighted_degree(self) -> dict:
        deg = {v: Fraction(0) for v in self.nodes}
        for e, w in self.weights.items():
            for v in e:
                deg[v] += w
        return deg


def project_with_multiplicity(h: Hypergraph) -> WeightedGraph:
    """Edge weight = number of hyperedges containing both endpoints."""
    w: dict[frozenset, int] = {}
    for e in h.hyperedges:
        for u, v in combinations(sorted(e), 2):
            key = frozenset((u, v))
            w[key] = w.get(key, 0) + 1
    return WeightedGraph(h.nodes, w)


def ndp_project(h: Hypergraph) -> tuple[WeightedGraph, dict]:
    """Node-degree-preserving projection.

    Each hyperedge E adds 1/(|E| - 1) to every pair it contains, so a node's
    weighted degree equals the number of hyperedges of size >= 2 holding it.
    The returned degree map counts all incident hyperedges, singletons too.
    """
    w: dict[frozenset, Fraction] = {}
    for e in h.hyperedges:
        if len(e) < 2:
            continue
        share = Fraction(1, len(e) - 1)
        for u, v in combinations(sorted(e), 2):
            key = frozenset((u, v))
            w[key] = w.get(key, Fraction(0)) + share
    return WeightedGraph(h.nodes, w), h.degrees()


def multiplicity_reconstruct(wg: WeightedGraph, weights: tuple[float, float] = (1.0, 1.0),
                             emit_singletons: bool = True,
                             cap: int = DEFAULT_CLIQUE_CAP) -> Hypergraph:
    """Peel maximal cliques off a multigraph until no edge remains.

    Each round scores the maximal cliques (size >= 2) of the current graph by
    ``a * size - b * mean edge multiplicity`` with both terms scaled to [0, 1]
    by their round maximum, emits the best one (ties: smallest sorted node
    list), and lowers its edge multiplicities by one.
    """
    size_coef, mult_coef = weights
    mult = {e: int(m) for e, m in wg.weights.items() if m > 0}
    if any(m != wg.weights[e] for e, m in mult.items()):
        raise ValueError("multiplicities must be integers")
    g = Graph.from_edges((tuple(e) for e in mult), wg.nodes)
    isolated = sorted(v for v in wg.nodes if not g.adj[v])
    cliques = {c for c in enumerate_maximal_cliques(g, cap) if len(c) >= 2}
    emitted: dict[frozenset, None] = {}
    while mult:
        max_size = max(len(c) for c in cliques)
        means = {c: sum(mult[frozenset(p)] for p in combinations(c, 2)) / (len(c) * (len(c) - 1) / 2)
                 for c in cliques}
        max_mean = max(means.values())
        best = min(cliques, key=lambda c: (-(size_coef * len(c) / max_size - mult_coef * means[c] / max_mean),
                                           tuple(sorted(c))))
        emitted.setdefault(best, None)
        removed = []
        for p in combinations(sorted(best), 2):
            key = frozenset(p)
            mult[key] -= 1
            if mult[key] == 0:
                del mult[key]
                removed.append(p)
        if not removed:
            continue
        adj = {v: set(nb) for v, nb in g.adj.items()}
        for u, v in removed:
            adj[u].discard(v)
            adj[v].discard(u)
        g = Graph({v: frozenset(nb) for v, nb in adj.items()})
        touched = {x for p in removed for x in p}
        # cliques spanning a removed edge die; new maximal cliques must hold a touched node
        cliques = {c for c in cliques if not any(u in c and v in c for u, v in removed)}
        for x in sorted(touched):
            if g.adj[x]:
                cliques.update(cliques_containing(g, x, cap))
        cliques = {c for c in cliques if len(c) >= 2}
    out = list(emitted)
    if emit_singletons:
        out += [frozenset((v,)) for v in isolated]
    return Hypergraph(wg.nodes, tuple(out))
