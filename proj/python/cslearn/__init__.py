"""Score-based causal structure learning with advisory suggestion oracles.

The native module carries the implementation; this package only re-exports
it. Oracles (including LLM-backed ones on the CLI side) shape where the
search looks, but every accept/reject decision comes from the data score.
"""

from cslearn._core import (
    BayesNet,
    CslearnError,
    Dag,
    Dataset,
    GenerationStats,
    SearchResult,
    audit_search,
    edge_f1,
    forward_sample,
    g2_test,
    ga_search,
    hill_climb,
    load_bif,
    mutual_information,
    parse_bif,
    prior_audit_stats,
    random_search,
    sample_synthetic,
    shd,
    synthetic_truth,
    total_score,
)

__all__ = [
    "BayesNet",
    "CslearnError",
    "Dag",
    "Dataset",
    "GenerationStats",
    "SearchResult",
    "audit_search",
    "edge_f1",
    "forward_sample",
    "g2_test",
    "ga_search",
    "hill_climb",
    "load_bif",
    "mutual_information",
    "parse_bif",
    "prior_audit_stats",
    "random_search",
    "sample_synthetic",
    "shd",
    "synthetic_truth",
    "total_score",
]
