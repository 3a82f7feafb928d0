"""Supervised reconstruction: sampler + classifier, plus evaluation helpers."""
from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .classifier import TrainConfig, constant_model, predict_proba, train_classifier
from .core import (DEFAULT_CLIQUE_CAP, Graph, Hypergraph, MaximalCliqueSet,
                   enumerate_maximal_cliques, partition_reconstruction_errors, project)
from .features import extract_features, feature_schema
from .multiplicity import WeightedGraph, ndp_project
from .rho import RhoTable, estimate_rho
from .sampler import CandidateSet, SamplerPlan, optimize_sampler, sample_candidates

log = logging.getLogger(__name__)


@dataclass
class ReconstructionConfig:
    beta: int = 1000
    features: str = "count"
    ndp_features: bool = False
    threshold: float = 0.5
    epochs: int = 2000
    learning_rate: float = 1e-4
    seed: int = 0
    clique_cap: int = DEFAULT_CLIQUE_CAP
    train_all_positives: bool = False


@dataclass
class ReconstructionResult:
    hyperedges: Hypergraph
    jaccard: float | None = None
    partitioned_errors: tuple | None = None
    config: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    n_candidates: int = 0

    def manifest(self) -> dict:
        out = dict(self.config)
        out["n_hyperedges"] = self.hyperedges.m
        out["n_candidates"] = self.n_candidates
        if self.jaccard is not None:
            out["jaccard"] = f"{self.jaccard:.10f}"
        if self.partitioned_errors is not None:
            out["errorI"], out["errorII"], out["other"] = self.partitioned_errors
        for k, v in self.timings.items():
            out[f"time_{k}"] = f"{v:.3f}"
        return out


def jaccard_score(truth: Hypergraph, recon: Hypergraph) -> float:
    """|E & R| / |E | R| over hyperedges as node sets; 1 when both are empty."""
    E, R = truth.edge_set, recon.edge_set
    union = len(E | R)
    return 1.0 if union == 0 else len(E & R) / union


def subsample_training(h: Hypergraph, fraction: float, seed: int | None = None,
                       keep_isolated: bool = False) -> Hypergraph:
    """Keep ceil(fraction * m) hyperedges chosen uniformly at random."""
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    k = math.ceil(fraction * h.m)
    keep = sorted(random.Random(seed).sample(range(h.m), k))
    edges = [h.hyperedges[i] for i in keep]
    ts = [h.timestamps[i] for i in keep] if h.timestamps is not None else None
    nodes = h.nodes if keep_isolated else None
    return Hypergraph.from_edges(edges, nodes, ts)


def maximal_clique_baseline(g: Graph, cap: int = DEFAULT_CLIQUE_CAP) -> Hypergraph:
    return Hypergraph(g.nodes, enumerate_maximal_cliques(g, cap).cliques)


def _as_query(q) -> tuple[Graph, dict | None]:
    if isinstance(q, WeightedGraph):
        return q.graph(), {v: float(d) for v, d in q.weighted_degree().items()}
    if isinstance(q, Hypergraph):
        return project(q), None
    if isinstance(q, Graph):
        return q, None
    raise TypeError(f"cannot use {type(q).__name__} as a query graph")


class Reconstructor:
    """Fit on a training hypergraph, then recover hyperedges from query projections."""

    def __init__(self, config: ReconstructionConfig | None = None):
        self.config = config or ReconstructionConfig()

    def fit(self, train_h: Hypergraph) -> "Reconstructor":
        cfg = self.config
        t0 = time.perf_counter()
        seeds = np.random.SeedSequence(cfg.seed).generate_state(3)
        self.query_seed_ = int(seeds[1])
        g0 = project(train_h)
        m0 = enumerate_maximal_cliques(g0, cfg.clique_cap)
        self.rho_table_: RhoTable = estimate_rho(train_h, m0)
        self.plan_, self.trace_, _ = optimize_sampler(self.rho_table_, cfg.beta)
        t1 = time.perf_counter()
        cands = sample_candidates(self.plan_, g0, m0, int(seeds[0]))
        if cfg.train_all_positives:
            seen = set(cands.cliques)
            for e in train_h.hyperedges:
                if e not in seen:
                    cands.cliques.append(e)
                    cands.provenance.append((0, len(e)))
        y = cands.label_against(train_h.edge_set)
        if not len(cands):
            raise ValueError("sampler produced no training candidates; raise beta")
        degrees = None
        if cfg.ndp_features:
            wg, _ = ndp_project(train_h)
            degrees = {v: float(d) for v, d in wg.weighted_degree().items()}
        X = extract_features(cands.cliques, g0, m0, cfg.features, degrees)
        t2 = time.perf_counter()
        schema = feature_schema(cfg.features, cfg.ndp_features)
        if y.min() == y.max():
            log.warning("training candidates are all %s; using a constant classifier",
                        "positive" if y[0] else "negative")
            self.model_ = constant_model(X.shape[1], int(y[0]), schema)
            self.loss_curve_ = []
        else:
            tc = TrainConfig(epochs=cfg.epochs, learning_rate=cfg.learning_rate, seed=int(seeds[2]))
            self.model_, self.loss_curve_ = train_classifier(X, y, tc, schema)
        self.model_.threshold = cfg.threshold
        t3 = time.perf_counter()
        self.train_candidates_ = cands
        self.timings_ = {"optimize": t1 - t0, "features_train": t2 - t1, "train": t3 - t2}
        return self

    @classmethod
    def from_model(cls, model, plan: SamplerPlan,
                   config: ReconstructionConfig | None = None) -> "Reconstructor":
        """Rebuild a fitted reconstructor from a saved classifier and plan."""
        rec = cls(config)
        rec.model_ = model
        rec.model_.threshold = rec.config.threshold
        rec.plan_ = plan
        rec.query_seed_ = int(np.random.SeedSequence(rec.config.seed).generate_state(3)[1])
        rec.timings_ = {}
        return rec

    def candidates(self, g: Graph, cliques: MaximalCliqueSet | None = None) -> CandidateSet:
        if cliques is None:
            cliques = enumerate_maximal_cliques(g, self.config.clique_cap)
        return sample_candidates(self.plan_, g, cliques, self.query_seed_)

    def predict(self, query, degrees: dict | None = None) -> Hypergraph:
        return self.reconstruct(query, degrees=degrees).hyperedges

    def reconstruct(self, query, truth: Hypergraph | None = None,
                    degrees: dict | None = None) -> ReconstructionResult:
        cfg = self.config
        g, wdeg = _as_query(query)
        degrees = degrees if degrees is not None else wdeg
        if cfg.ndp_features and degrees is None:
            raise ValueError("ndp features need node degrees (pass a WeightedGraph or degrees=)")
        t0 = time.perf_counter()
        m1 = enumerate_maximal_cliques(g, cfg.clique_cap)
        cands = self.candidates(g, m1)
        if not len(cands):
            raise ValueError("sampler produced no query candidates")
        X = extract_features(cands.cliques, g, m1, cfg.features, degrees if cfg.ndp_features else None)
        t1 = time.perf_counter()
        p = predict_proba(self.model_, X)
        keep = [c for c, pi in zip(cands.cliques, p) if pi >= self.model_.threshold]
        recon = Hypergraph(g.nodes, tuple(sorted(keep, key=lambda e: tuple(sorted(e)))))
        t2 = time.perf_counter()
        result = ReconstructionResult(recon, config=asdict(cfg), n_candidates=len(cands),
                                      timings={**self.timings_, "features_query": t1 - t0,
                                               "predict": t2 - t1})
        if truth is not None:
            result.jaccard = jaccard_score(truth, recon)
            result.partitioned_errors = partition_reconstruction_errors(recon, truth, m1)
        return result


def reconstruct(train_h: Hypergraph, query, cfg: ReconstructionConfig | None = None,
                truth: Hypergraph | None = None) -> ReconstructionResult:
    """Four steps: optimize the sampler on the training hypergraph, sample
    candidates from both projections, train the classifier on the training
    candidates, classify the query candidates."""
    return Reconstructor(cfg).fit(train_h).reconstruct(query, truth)


def plan_from(train_h: Hypergraph, beta: int, cap: int = DEFAULT_CLIQUE_CAP) -> tuple[SamplerPlan, RhoTable]:
    g0 = project(train_h)
    t = estimate_rho(train_h, enumerate_maximal_cliques(g0, cap))
    return optimize_sampler(t, beta)[0], t
