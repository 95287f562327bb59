"""Discrete Bayesian-network engine for cascading urban-risk analysis.

Learns DAG structure from binary indicator data by hill climbing under
BIC or K2 scores, fits smoothed conditional probability tables, answers
exact posterior queries by variable elimination, and measures multi-hop
risk propagation between infrastructure domains.
"""

from .cascade import CascadePath, CascadeReport, CascadeScenario, cascade_lift, rank_scenarios
from .dataset import (
    DOMAINS,
    ColumnSpec,
    SmoteConfig,
    TabularDataset,
    augment_bootstrap,
    discretize,
    fill_thresholds,
    load_csv,
    load_schema,
    smote_balance,
)
from .errors import CascadeBnError
from .graph import Dag, EdgeEdit, EditKind, apply_edit, enumerate_paths, topological_order
from .inference import Factor, Posterior, joint_enumeration, query
from .params import BayesNet, Cpt, fit_cpts
from .scoring import Objective, ScoreCache, bic_family, family_counts, k2_family_log, total_score
from .search import SearchConfig, SearchTrace, exhaustive_best, hill_climb

__version__ = "0.1.0"

__all__ = [
    "BayesNet",
    "CascadeBnError",
    "CascadePath",
    "CascadeReport",
    "CascadeScenario",
    "ColumnSpec",
    "Cpt",
    "DOMAINS",
    "Dag",
    "EdgeEdit",
    "EditKind",
    "Factor",
    "Objective",
    "Posterior",
    "ScoreCache",
    "SearchConfig",
    "SearchTrace",
    "SmoteConfig",
    "TabularDataset",
    "apply_edit",
    "augment_bootstrap",
    "bic_family",
    "cascade_lift",
    "discretize",
    "enumerate_paths",
    "exhaustive_best",
    "family_counts",
    "fill_thresholds",
    "fit_cpts",
    "hill_climb",
    "joint_enumeration",
    "k2_family_log",
    "load_csv",
    "load_schema",
    "query",
    "rank_scenarios",
    "smote_balance",
    "topological_order",
    "total_score",
]
