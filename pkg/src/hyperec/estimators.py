"""scikit-learn compatible wrappers around the reconstruction pieces.

These give the sampler, featurizer, classifier and full pipeline the usual
``fit`` / ``transform`` / ``predict`` / ``get_params`` surface so they can be
cloned, grid-searched and composed with other estimators.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import classifier as _clf
from .core import DEFAULT_CLIQUE_CAP, enumerate_maximal_cliques, project
from .features import extract_features, feature_schema
from .pipeline import ReconstructionConfig, Reconstructor, jaccard_score
from .rho import estimate_rho
from .sampler import CandidateSet, expected_coverage, optimize_sampler, sample_candidates
from .validation import (check_binary_labels, check_feature_matrix, check_graph,
                         check_hypergraph)


class CliqueSampler(BaseEstimator):
    """Learns per-cell sampling ratios from a training hypergraph."""

    def __init__(self, beta=1000, seed=0, clique_cap=DEFAULT_CLIQUE_CAP):
        self.beta = beta
        self.seed = seed
        self.clique_cap = clique_cap

    def fit(self, H, y=None):
        H = check_hypergraph(H)
        cliques = enumerate_maximal_cliques(project(H), self.clique_cap)
        self.rho_table_ = estimate_rho(H, cliques)
        self.plan_, self.trace_, _ = optimize_sampler(self.rho_table_, int(self.beta))
        self.coverage_ = expected_coverage(self.plan_, self.rho_table_)
        return self

    def sample(self, G) -> CandidateSet:
        check_is_fitted(self, "plan_")
        g = check_graph(G)
        cliques = enumerate_maximal_cliques(g, self.clique_cap)
        return sample_candidates(self.plan_, g, cliques, self.seed)


class CliqueFeaturizer(TransformerMixin, BaseEstimator):
    """Stateless map from a CandidateSet to a feature matrix."""

    def __init__(self, mode="count", ndp_features=False):
        self.mode = mode
        self.ndp_features = ndp_features

    def fit(self, X=None, y=None):
        self.n_features_out_ = len(feature_schema(self.mode, self.ndp_features))
        return self

    def transform(self, X: CandidateSet, degrees=None):
        if not isinstance(X, CandidateSet):
            raise TypeError("CliqueFeaturizer.transform expects a CandidateSet")
        if self.ndp_features and degrees is None:
            raise ValueError("ndp_features=True needs a node degree map")
        return extract_features(X.cliques, X.graph, X.max_cliques, self.mode,
                                degrees if self.ndp_features else None)

    def get_feature_names_out(self, input_features=None):
        return np.array(feature_schema(self.mode, self.ndp_features), dtype=object)


class HyperedgeClassifier(ClassifierMixin, BaseEstimator):
    """One hidden layer (ReLU), logistic output, cross-entropy, Adam."""

    def __init__(self, hidden=100, epochs=2000, learning_rate=1e-4, seed=0, threshold=0.5,
                 batch_size=None):
        self.hidden = hidden
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed
        self.threshold = threshold
        self.batch_size = batch_size

    def fit(self, X, y):
        X = check_feature_matrix(X)
        y = check_binary_labels(y, X.shape[0])
        cfg = _clf.TrainConfig(epochs=self.epochs, learning_rate=self.learning_rate, seed=self.seed,
                               batch_size=self.batch_size, hidden=self.hidden)
        self.model_, self.loss_curve_ = _clf.train_classifier(X, y, cfg)
        self.model_.threshold = self.threshold
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "model_")
        p = _clf.predict_proba(self.model_, check_feature_matrix(X, self.n_features_in_))
        return np.column_stack([1 - p, p])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= self.threshold).astype(np.int64)

    def save(self, path):
        check_is_fitted(self, "model_")
        _clf.save_model(self.model_, path)

    @classmethod
    def load(cls, path) -> "HyperedgeClassifier":
        model = _clf.load_model(path)
        est = cls(hidden=model.W1.shape[1], threshold=model.threshold)
        est.model_ = model
        est.loss_curve_ = []
        est.classes_ = np.array([0, 1])
        est.n_features_in_ = model.input_dim
        return est


class HypergraphReconstructor(BaseEstimator):
    """End-to-end estimator: ``fit(train_hypergraph)`` then ``predict(query_graph)``."""

    def __init__(self, beta=1000, features="count", ndp_features=False, threshold=0.5,
                 epochs=2000, learning_rate=1e-4, seed=0, clique_cap=DEFAULT_CLIQUE_CAP):
        self.beta = beta
        self.features = features
        self.ndp_features = ndp_features
        self.threshold = threshold
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed
        self.clique_cap = clique_cap

    def _config(self) -> ReconstructionConfig:
        return ReconstructionConfig(beta=int(self.beta), features=self.features,
                                    ndp_features=self.ndp_features, threshold=self.threshold,
                                    epochs=self.epochs, learning_rate=self.learning_rate,
                                    seed=self.seed, clique_cap=self.clique_cap)

    def fit(self, H, y=None):
        self.reconstructor_ = Reconstructor(self._config()).fit(check_hypergraph(H))
        self.plan_ = self.reconstructor_.plan_
        self.rho_table_ = self.reconstructor_.rho_table_
        return self

    def predict(self, G, degrees=None):
        check_is_fitted(self, "reconstructor_")
        return self.reconstructor_.predict(G, degrees=degrees)

    def score(self, G, H_true):
        """Jaccard score of the reconstruction of ``G`` against ``H_true``."""
        return jaccard_score(check_hypergraph(H_true), self.predict(G))
