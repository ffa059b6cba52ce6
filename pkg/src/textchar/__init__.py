"""Characteristic metrics for collections of embedding vectors.

Three unsupervised numbers summarize a labeled collection of vectors:
diversity (geometric mean of per-axis dispersion), density (samples per
unit of dispersion volume, dimension-tempered), and homogeneity (entropy
rate of a random walk over the pairwise-distance graph, normalized to
[0, 1]). The subpackages cover the metric core, synthetic-cluster
sweeps, file ingestion with mean pooling, dataset-level aggregation and
correlation, and a small CLI.
"""

from .analysis import (
    AggregateMetrics,
    CorrelationEntry,
    CorrelationReport,
    DatasetProfile,
    SweepRow,
    SweepTable,
    correlation_report,
    downsample_sweep,
    pearson,
    profile_dataset,
)
from .errors import (
    DegenerateCluster,
    DegenerateInput,
    DimensionMismatch,
    EmptyClass,
    EmptyResult,
    EmptySequence,
    InconsistentClassSize,
    NonFiniteValue,
    ParseError,
    TextcharError,
    TooFewSamples,
)
from .io import (
    LabeledEmbeddings,
    Record,
    TokenSequence,
    group_by_label,
    mean_pool,
    pool_token_file,
    read_token_sequences,
    read_vectors,
    write_vectors,
)
from .metrics import (
    ClusterStats,
    DensityResult,
    MarkovChainSummary,
    MetricReport,
    axis_stats,
    density,
    diversity,
    entropy_rate,
    homogeneity,
    metric_report,
    pairwise_weight,
    stationary_distribution,
)
from .simulation import (
    BlobSpec,
    ScenarioResult,
    ScenarioRow,
    ScenarioSpec,
    add_outliers,
    down_sample,
    gaussian_blob,
    run_scenario,
    scenario,
    sphere_points,
    sub_clusters,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateMetrics",
    "BlobSpec",
    "ClusterStats",
    "CorrelationEntry",
    "CorrelationReport",
    "DatasetProfile",
    "DegenerateCluster",
    "DegenerateInput",
    "DensityResult",
    "DimensionMismatch",
    "EmptyClass",
    "EmptyResult",
    "EmptySequence",
    "InconsistentClassSize",
    "LabeledEmbeddings",
    "MarkovChainSummary",
    "MetricReport",
    "NonFiniteValue",
    "ParseError",
    "Record",
    "ScenarioResult",
    "ScenarioRow",
    "ScenarioSpec",
    "SweepRow",
    "SweepTable",
    "TextcharError",
    "TokenSequence",
    "TooFewSamples",
    "add_outliers",
    "axis_stats",
    "correlation_report",
    "density",
    "diversity",
    "down_sample",
    "downsample_sweep",
    "entropy_rate",
    "gaussian_blob",
    "group_by_label",
    "homogeneity",
    "mean_pool",
    "metric_report",
    "pairwise_weight",
    "pearson",
    "pool_token_file",
    "profile_dataset",
    "read_token_sequences",
    "read_vectors",
    "run_scenario",
    "scenario",
    "sphere_points",
    "stationary_distribution",
    "sub_clusters",
    "write_vectors",
    "__version__",
]
