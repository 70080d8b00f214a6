"""Density-based intent discovery for utterance embeddings.

Pipeline: cluster with iterative density relaxation, review and label
clusters, propagate intents to the leftovers, export training data.
"""

__version__ = "0.1.0"

from .core import (
    NOISE,
    ClusterAssignment,
    Dataset,
    UtteranceRecord,
    normalize_assignment,
    validate_dataset,
)
from .dbscan import DbscanParams, run_dbscan
from .iterdbscan import (
    IterationRound,
    IterationTrace,
    IterDbscanParams,
    default_grid,
    run_iter_dbscan,
)
from .metrics import (
    ContingencyTable,
    EvalReport,
    ari,
    cluster_prf,
    clustering_accuracy,
    evaluate,
    intents_found,
    nmi,
)
from .neighbors import cosine_distance, region_query
from .partition import PartitionPlan, cluster_partitioned, kmeans, partition_count
from .propagate import (
    IntentClassifier,
    LabelState,
    TrainingConfig,
    UtteranceLabel,
    export_training_data,
    label_state_from_clusters,
    propagate_labels,
    train_classifier,
)

__all__ = [
    "NOISE",
    "ClusterAssignment",
    "ContingencyTable",
    "Dataset",
    "DbscanParams",
    "EvalReport",
    "IntentClassifier",
    "IterationRound",
    "IterationTrace",
    "IterDbscanParams",
    "LabelState",
    "PartitionPlan",
    "TrainingConfig",
    "UtteranceRecord",
    "ari",
    "cluster_prf",
    "clustering_accuracy",
    "cluster_partitioned",
    "cosine_distance",
    "default_grid",
    "evaluate",
    "export_training_data",
    "intents_found",
    "kmeans",
    "label_state_from_clusters",
    "nmi",
    "normalize_assignment",
    "partition_count",
    "propagate_labels",
    "region_query",
    "run_dbscan",
    "run_iter_dbscan",
    "train_classifier",
    "validate_dataset",
]
