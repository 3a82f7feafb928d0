"""Hypergraphs, clique-expansion projections and maximal clique enumeration.

Also hosts the structural diagnostics that explain why a projection loses
information: nested hyperedges (Sperner violations), maximal cliques that are
not hyperedges (conformality violations), and the Error I / Error II
accounting of the maximal-clique reconstruction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

DEFAULT_CLIQUE_CAP = 10_000_000


class CliqueLimitError(RuntimeError):
    """Raised when maximal clique enumeration exceeds the configured cap."""


def _edge_key(edge: frozenset) -> tuple:
    return (len(edge), tuple(sorted(edge)))


def _lex_key(edge: frozenset) -> tuple:
    return tuple(sorted(edge))


@dataclass(frozen=True)
class Hypergraph:
    """A node set plus a tuple of pairwise-distinct, non-empty hyperedges.

    ``timestamps`` is optional and, when present, runs parallel to
    ``hyperedges`` (integer epoch seconds).
    """

    nodes: frozenset
    hyperedges: tuple
    timestamps: tuple | None = None

    def __post_init__(self):
        seen = set()
        for e in self.hyperedges:
            if not isinstance(e, frozenset):
                raise TypeError("hyperedges must be frozensets")
            if not e:
                raise ValueError("empty hyperedge")
            if e in seen:
                raise ValueError(f"duplicate hyperedge {sorted(e)}")
            if not e <= self.nodes:
                raise ValueError(f"hyperedge {sorted(e)} uses nodes outside the node set")
            seen.add(e)
        if self.timestamps is not None and len(self.timestamps) != len(self.hyperedges):
            raise ValueError("timestamps must align with hyperedges")

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], nodes: Iterable[int] | None = None,
                   timestamps: Iterable[int] | None = None) -> "Hypergraph":
        hyperedges = tuple(frozenset(int(v) for v in e) for e in edges)
        node_set = frozenset().union(*hyperedges) if hyperedges else frozenset()
        if nodes is not None:
            node_set = node_set | frozenset(int(v) for v in nodes)
        ts = tuple(int(t) for t in timestamps) if timestamps is not None else None
        return cls(node_set, hyperedges, ts)

    @property
    def m(self) -> int:
        return len(self.hyperedges)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.hyperedges)

    @cached_property
    def incidence(self) -> dict:
        """node -> tuple of hyperedge indices containing it."""
        inc: dict[int, list[int]] = {v: [] for v in self.nodes}
        for i, e in enumerate(self.hyperedges):
            for v in e:
                inc[v].append(i)
        return {v: tuple(ix) for v, ix in inc.items()}

    def degrees(self) -> dict:
        return {v: len(ix) for v, ix in self.incidence.items()}

    def canonical(self) -> "Hypergraph":
        """Same hypergraph with hyperedges sorted lexicographically."""
        if self.timestamps is None:
            order = sorted(range(self.m), key=lambda i: _lex_key(self.hyperedges[i]))
            return Hypergraph(self.nodes, tuple(self.hyperedges[i] for i in order))
        order = sorted(range(self.m), key=lambda i: (self.timestamps[i], _lex_key(self.hyperedges[i])))
        return Hypergraph(self.nodes, tuple(self.hyperedges[i] for i in order),
                          tuple(self.timestamps[i] for i in order))

    def relabel(self, mapping: Mapping[int, int]) -> "Hypergraph":
        return Hypergraph(
            frozenset(mapping[v] for v in self.nodes),
            tuple(frozenset(mapping[v] for v in e) for e in self.hyperedges),
            self.timestamps,
        )

    def __len__(self):
        return self.m


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph stored as an adjacency map."""

    adj: Mapping

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], nodes: Iterable[int] = ()) -> "Graph":
        adj: dict[int, set[int]] = {int(v): set() for v in nodes}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls({v: frozenset(nb) for v, nb in adj.items()})

    @cached_property
    def nodes(self) -> frozenset:
        return frozenset(self.adj)

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(frozenset((u, v)) for u, nb in self.adj.items() for v in nb if u < v)

    @property
    def n_edges(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj.get(u, ())

    def is_clique(self, nodes: Iterable[int]) -> bool:
        ns = list(nodes)
        if any(v not in self.adj for v in ns):
            return False
        return all(b in self.adj[a] for a, b in combinations(ns, 2))

    def relabel(self, mapping: Mapping[int, int]) -> "Graph":
        return Graph({mapping[v]: frozenset(mapping[u] for u in nb) for v, nb in self.adj.items()})


@dataclass(frozen=True)
class MaximalCliqueSet:
    """All maximal cliques of a graph, sorted lexicographically."""

    cliques: tuple
    size_index: Mapping = field(default_factory=dict)

    @classmethod
    def from_cliques(cls, cliques: Iterable[Iterable[int]]) -> "MaximalCliqueSet":
        cs = sorted({frozenset(c) for c in cliques}, key=_lex_key)
        index: dict[int, list[int]] = {}
        for i, c in enumerate(cs):
            index.setdefault(len(c), []).append(i)
        return cls(tuple(cs), {n: tuple(ix) for n, ix in sorted(index.items())})

    @property
    def max_size(self) -> int:
        return max(self.size_index, default=0)

    @cached_property
    def clique_set(self) -> frozenset:
        return frozenset(self.cliques)

    @cached_property
    def node_index(self) -> dict:
        """node -> tuple of indices of cliques containing it."""
        inc: dict[int, list[int]] = {}
        for i, c in enumerate(self.cliques):
            for v in c:
                inc.setdefault(v, []).append(i)
        return {v: tuple(ix) for v, ix in inc.items()}

    def of_size(self, n: int) -> list:
        return [self.cliques[i] for i in self.size_index.get(n, ())]

    def containing(self, nodes: Iterable[int]) -> list[int]:
        """Indices of cliques containing every node in ``nodes``."""
        ns = list(nodes)
        if not ns:
            return list(range(len(self.cliques)))
        lists = sorted((self.node_index.get(v, ()) for v in ns), key=len)
        out = set(lists[0])
        for ix in lists[1:]:
            out.intersection_update(ix)
        return sorted(out)

    def __len__(self):
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)


@dataclass(frozen=True)
class ErrorProfile:
    total_union: int
    error_i: float
    error_ii: float
    nested_hyperedges: int
    spurious_max_cliques: int
    missed_non_nested: int
    n_max_cliques: int
    n_non_nested: int


def project(h: Hypergraph) -> Graph:
    """Clique expansion: join two nodes iff they share a hyperedge."""
    adj: dict[int, set[int]] = {v: set() for v in h.nodes}
    for e in h.hyperedges:
        for v in e:
            adj[v].update(e)
    for v, nb in adj.items():
        nb.discard(v)
    return Graph({v: frozenset(nb) for v, nb in adj.items()})


def degeneracy_order(g: Graph) -> list[int]:
    """Nodes in smallest-last (degeneracy) order, ties by node id."""
    import heapq

    deg = {v: len(nb) for v, nb in g.adj.items()}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed: set[int] = set()
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        for u in g.adj[v]:
            if u not in removed:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    return order


def _bk_pivot(adj, r, p, x, out, cap):
    if not p and not x:
        out.append(frozenset(r))
        if len(out) > cap:
            raise CliqueLimitError(f"more than {cap} maximal cliques")
        return
    pivot = max(p | x, key=lambda u: len(p & adj[u]))
    for v in list(p - adj[pivot]):
        nb = adj[v]
        r.append(v)
        _bk_pivot(adj, r, p & nb, x & nb, out, cap)
        r.pop()
        p = p - {v}
        x = x | {v}


def cliques_containing(g: Graph, v: int, cap: int = DEFAULT_CLIQUE_CAP,
                       exclude: frozenset = frozenset()) -> list[frozenset]:
    """Maximal cliques of ``g`` that contain ``v``.

    Nodes in ``exclude`` (neighbours of ``v``) are put in the excluded set,
    which suppresses cliques containing any of them.
    """
    nb = g.adj[v]
    out: list[frozenset] = []
    _bk_pivot(g.adj, [v], set(nb - exclude), set(nb & exclude), out, cap)
    return out


def enumerate_maximal_cliques(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> MaximalCliqueSet:
    """All maximal cliques, isolated nodes included as singletons.

    Pivoting Bron-Kerbosch run once per vertex along a degeneracy ordering,
    so each clique is reported exactly once (from its earliest vertex).
    """
    order = degeneracy_order(g)
    pos = {v: i for i, v in enumerate(order)}
    out: list[frozenset] = []
    for v in order:
        nb = g.adj[v]
        later = {u for u in nb if pos[u] > pos[v]}
        earlier = {u for u in nb if pos[u] < pos[v]}
        _bk_pivot(g.adj, [v], later, earlier, out, cap)
    return MaximalCliqueSet.from_cliques(out)


def non_nested_hyperedges(h: Hypergraph) -> frozenset:
    """Hyperedges that are not a proper subset of another hyperedge."""
    inc = h.incidence
    keep = []
    for e in h.hyperedges:
        v = min(e, key=lambda u: len(inc[u]))
        if not any(len(h.hyperedges[j]) > len(e) and e < h.hyperedges[j] for j in inc[v]):
            keep.append(e)
    return frozenset(keep)


def check_sperner(h: Hypergraph) -> tuple[bool, list[tuple[frozenset, frozenset]]]:
    """Return (no nesting?, [(nested, container), ...]) in canonical order."""
    inc = h.incidence
    pairs = []
    for e in h.hyperedges:
        v = min(e, key=lambda u: len(inc[u]))
        for j in inc[v]:
            other = h.hyperedges[j]
            if e < other:
                pairs.append((e, other))
    pairs.sort(key=lambda p: (_lex_key(p[0]), _lex_key(p[1])))
    return not pairs, pairs


def check_conformal_direct(h: Hypergraph, cliques: MaximalCliqueSet | None = None,
                           cap: int = DEFAULT_CLIQUE_CAP) -> tuple[bool, list[frozenset]]:
    """Every maximal clique of the projection is a hyperedge."""
    if cliques is None:
        cliques = enumerate_maximal_cliques(project(h), cap)
    bad = [c for c in cliques if c not in h.edge_set]
    return not bad, bad


def check_conformal_triangle(h: Hypergraph) -> bool:
    """Conformality from hyperedge triples alone, without clique enumeration.

    For every three hyperedges the union of their pairwise intersections must
    fit inside a single hyperedge.  A node covered by no hyperedge is an
    isolated singleton clique that is not a hyperedge, so it also fails.
    """
    covered = frozenset().union(*h.hyperedges) if h.hyperedges else frozenset()
    if covered != h.nodes:
        return False
    edges = h.hyperedges
    inc = h.incidence
    for a, b, c in combinations(range(len(edges)), 3):
        ea, eb, ec = edges[a], edges[b], edges[c]
        u = (ea & eb) | (eb & ec) | (ec & ea)
        if len(u) <= 1:
            # a single node (or nothing) is always inside the hyperedge that holds it
            continue
        v = next(iter(u))
        if not any(u <= edges[j] for j in inc[v]):
            return False
    return True


def projection_error_profile(h: Hypergraph, cliques: MaximalCliqueSet | None = None,
                             cap: int = DEFAULT_CLIQUE_CAP) -> ErrorProfile:
    if cliques is None:
        cliques = enumerate_maximal_cliques(project(h), cap)
    E = h.edge_set
    M = cliques.clique_set
    Ep = non_nested_hyperedges(h)
    union = len(E | M)
    nested = len(E - Ep)
    spurious = len(M - Ep)
    missed = len(Ep - M)
    if union == 0:
        return ErrorProfile(0, 0.0, 0.0, 0, 0, 0, 0, 0)
    return ErrorProfile(union, nested / union, (spurious + missed) / union,
                        nested, spurious, missed, len(M), len(Ep))


def partition_reconstruction_errors(reconstructed: Hypergraph, truth: Hypergraph,
                                    cliques: MaximalCliqueSet) -> tuple[int, int, int]:
    """Attribute each false positive / false negative to Error I, II or other.

    A missed hyperedge nested inside another true hyperedge is Error I.  A
    remaining mistake lying in the symmetric difference of the maximal cliques
    and the non-nested hyperedges is Error II.  Anything else is "other".
    """
    R = reconstructed.edge_set
    E = truth.edge_set
    M = cliques.clique_set
    Ep = non_nested_hyperedges(truth)
    nested = E - Ep
    err1 = err2 = other = 0
    for s in E - R:
        if s in nested:
            err1 += 1
        elif s not in M:
            err2 += 1
        else:
            other += 1
    for s in R - E:
        if s in M:
            err2 += 1
        else:
            other += 1
    return err1, err2, other
