import random
from fractions import Fraction
from itertools import combinations
from math import comb

from hyperec import (Hypergraph, jaccard_score, multiplicity_reconstruct, ndp_project,
                     project, project_with_multiplicity)
from oracles import random_hypergraph_edges


def test_multiplicity_counts(nested_pair):
    wg = project_with_multiplicity(nested_pair)
    assert wg.weights == {frozenset({1, 2}): 2, frozenset({1, 3}): 1, frozenset({2, 3}): 1}


def test_multiplicity_identities():
    rng = random.Random(0)
    for _ in range(30):
        h = Hypergraph.from_edges(random_hypergraph_edges(rng, 12, 10, max_size=5))
        wg = project_with_multiplicity(h)
        assert sum(wg.weights.values()) == sum(comb(len(e), 2) for e in h.hyperedges)
        assert wg.graph().edges == project(h).edges
        for e, w in wg.weights.items():
            assert w == sum(1 for s in h.hyperedges if e <= s)


def test_disjoint_recovered_exactly():
    h = Hypergraph.from_edges([[1, 2, 3], [4, 5], [6, 7, 8, 9], [10]])
    wg = project_with_multiplicity(h)
    assert set(wg.weights.values()) == {1}
    assert jaccard_score(h, multiplicity_reconstruct(wg)) == 1.0


def test_nested_pair_recovered(nested_pair):
    out = multiplicity_reconstruct(project_with_multiplicity(nested_pair), (1, 1))
    assert out.edge_set == nested_pair.edge_set


def test_termination_and_clique_property():
    rng = random.Random(5)
    for _ in range(25):
        h = Hypergraph.from_edges(random_hypergraph_edges(rng, 14, 12, max_size=5))
        wg = project_with_multiplicity(h)
        out = multiplicity_reconstruct(wg, emit_singletons=False)
        g = wg.graph()
        assert all(g.is_clique(e) and len(e) >= 2 for e in out.hyperedges)
        assert out.m <= sum(wg.weights.values())
        # every multigraph edge is consumed by some emitted clique
        assert {frozenset(p) for e in out.hyperedges for p in combinations(e, 2)} == set(wg.weights)


def test_ndp_projection():
    wg, deg = ndp_project(Hypergraph.from_edges([[1, 2, 3]]))
    assert set(wg.weights.values()) == {Fraction(1, 2)}
    assert wg.weighted_degree() == {1: 1, 2: 1, 3: 1}
    rng = random.Random(2)
    for _ in range(30):
        h = Hypergraph.from_edges(random_hypergraph_edges(rng, 10, 9, max_size=4))
        wg, deg = ndp_project(h)
        inc = {v: sum(1 for e in h.hyperedges if v in e) for v in h.nodes}
        assert deg == inc
        for v, d in wg.weighted_degree().items():
            # singletons only add to the degree map
            assert d == sum(1 for e in h.hyperedges if v in e and len(e) >= 2)
