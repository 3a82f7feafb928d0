"""Reconstruct hypergraphs from their clique-expansion projections."""
from .core import (CliqueLimitError, ErrorProfile, Graph, Hypergraph, MaximalCliqueSet,
                   check_conformal_direct, check_conformal_triangle, check_sperner,
                   enumerate_maximal_cliques, non_nested_hyperedges,
                   partition_reconstruction_errors, project, projection_error_profile)
from .estimators import (CliqueFeaturizer, CliqueSampler, HyperedgeClassifier,
                         HypergraphReconstructor)
from .multiplicity import (WeightedGraph, multiplicity_reconstruct, ndp_project,
                           project_with_multiplicity)
from .pipeline import (ReconstructionConfig, ReconstructionResult, jaccard_score,
                       maximal_clique_baseline, reconstruct, subsample_training)
from .rho import RhoTable, estimate_rho, export_rho, load_rho, rho_distance
from .sampler import (CandidateSet, SamplerPlan, expected_coverage, optimize_sampler,
                      sample_candidates, tune_beta, update_column)

__version__ = "0.1.0"
