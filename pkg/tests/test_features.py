import random
from itertools import combinations

import numpy as np
import pytest

from hyperec import Graph, enumerate_maximal_cliques
from hyperec.features import (MOTIF_SCHEMA, count_features, extract_features, feature_schema,
                              features_to_csv, motif_features, ndp_degree_features, summarize)
from oracles import brute_maximal_cliques, naive_count_features, naive_motif_features


def _random_graph(rng, n=12, p=0.4):
    pairs = {frozenset(e) for e in combinations(range(n), 2) if rng.random() < p}
    return Graph.from_edges([tuple(e) for e in pairs], range(n)), pairs


def _random_clique(rng, g, cliques):
    m = rng.choice(cliques)
    return frozenset(rng.sample(sorted(m), rng.randint(1, len(m))))


def test_lone_triangle():
    g = Graph.from_edges([(1, 2), (2, 3), (1, 3)])
    m = enumerate_maximal_cliques(g)
    assert count_features({1, 2, 3}, g, m).tolist() == [3, 2, 2, 1, 1, 0, 1, 3]


def test_isolated_node():
    g = Graph.from_edges([], nodes=[7])
    m = enumerate_maximal_cliques(g)
    assert count_features({7}, g, m).tolist() == [1, 0, 0, 1, 0, 1, 0, 1]
    mf = motif_features({7}, g, m)
    assert len(mf) == 52 and np.all(mf[12:] == 0)


def test_summarize():
    assert summarize([2, 2, 2]).tolist() == [2, 0, 2, 2]
    assert summarize([]).tolist() == [0, 0, 0, 0]
    assert summarize([1, 3]).tolist() == [2, 1, 1, 3]


def test_two_triangles_motifs():
    g = Graph.from_edges([(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    m = enumerate_maximal_cliques(g)
    f = motif_features({2, 3}, g, m).reshape(13, 4)
    # per node: two containing cliques sharing {2,3}, so one type-3 motif each
    assert f[0].tolist() == [2, 0, 2, 2]
    assert f[1].tolist() == [0, 0, 0, 0]
    assert f[2].tolist() == [1, 0, 1, 1]
    # the pair sits in both cliques and the cliques overlap exactly on it
    assert f[3].tolist() == [2, 0, 2, 2]
    assert f[5].tolist() == [1, 0, 1, 1]
    assert np.all(np.delete(f, [0, 2, 3, 5], axis=0) == 0)


def test_count_features_oracle():
    rng = random.Random(0)
    done = 0
    while done < 200:
        g, pairs = _random_graph(rng)
        M = brute_maximal_cliques(g.nodes, pairs)
        m = enumerate_maximal_cliques(g)
        for _ in range(10):
            c = _random_clique(rng, g, sorted(M, key=sorted))
            got = count_features(c, g, m)
            np.testing.assert_allclose(got, naive_count_features(c, g.nodes, pairs, M), rtol=1e-12)
            assert got[5] in (0, 1) and 0 <= got[6] <= 1
            assert all(got[i] >= 1 for i in (0, 3, 7))
            if len(c) > 1:
                assert got[4] >= 1
            done += 1


def test_motif_features_oracle():
    rng = random.Random(1)
    done = 0
    while done < 200:
        g, pairs = _random_graph(rng)
        M = brute_maximal_cliques(g.nodes, pairs)
        m = enumerate_maximal_cliques(g)
        for _ in range(10):
            c = _random_clique(rng, g, sorted(M, key=sorted))
            got = motif_features(c, g, m)
            assert got.shape == (52,)
            np.testing.assert_allclose(got, naive_motif_features(c, M), rtol=1e-12, atol=1e-12)
            done += 1


@pytest.mark.parametrize("mode", ["count", "motif"])
def test_relabel_invariance(mode):
    rng = random.Random(4)
    g, _ = _random_graph(rng, 11, 0.45)
    m = enumerate_maximal_cliques(g)
    perm = list(range(11))
    rng.shuffle(perm)
    mp = dict(enumerate(perm))
    g2 = g.relabel(mp)
    m2 = enumerate_maximal_cliques(g2)
    cands = [_random_clique(rng, g, list(m.cliques)) for _ in range(30)]
    a = extract_features(cands, g, m, mode)
    b = extract_features([frozenset(mp[v] for v in c) for c in cands], g2, m2, mode)
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_ndp_degree_features():
    assert ndp_degree_features({1, 2, 3}, {1: 2, 2: 2, 3: 2}).tolist() == [2, 2]
    assert ndp_degree_features({1, 2}, {1: 1, 2: 3}).tolist() == [1, 2]
    with pytest.raises(KeyError):
        ndp_degree_features({1, 9}, {1: 1})


def test_schema_and_extract():
    assert len(feature_schema("count")) == 8 and len(feature_schema("motif")) == 52
    assert len(feature_schema("count", ndp=True)) == 10
    assert feature_schema("motif") == MOTIF_SCHEMA
    with pytest.raises(ValueError):
        feature_schema("embedding")
    g = Graph.from_edges([(1, 2), (2, 3), (1, 3)])
    m = enumerate_maximal_cliques(g)
    X = extract_features([{1, 2}, {1, 2, 3}], g, m, "count", {1: 1, 2: 1, 3: 1})
    assert X.shape == (2, 10)
    csv = features_to_csv(X, feature_schema("count", True)).splitlines()
    assert csv[0].startswith("size,") and len(csv) == 3
