"""Semi-supervised model-based clustering with partition-level side information.

Fits a max-of-weighted-Gaussians model to data by cross-entropy
minimization, using optional partial labels as a consistency constraint
and reducing the cluster count automatically. The consistency weight beta
trades model fit against agreement with the labels; the thresholds module
computes the critical weights at which merged clusters split.
"""

from .costs import (
    CostBreakdown,
    cec_cost,
    cecib_cost,
    cluster_cost,
    cluster_cost_from_stats,
    conditional_cross_entropy,
)
from .dataio import Dataset, load_csv, pca_basis, pca_reduce
from .estimator import CECIB
from .evaluate import (
    LabelProtocol,
    gaussian_mixture_sample,
    nmi,
    run_protocol_grid,
    sample_side_info,
)
from .exceptions import (
    CecibError,
    ConfigurationError,
    CsvParseError,
    DegenerateModelError,
    DegenerateScenarioError,
    EmptyClusterError,
    UnsupportedSettingError,
)
from .optimize import FitConfig, FitReport, HartiganState, default_ridge, fit, move_delta
from .partitions import (
    Clustering,
    SideInfo,
    conditional_entropy,
    contingency,
    entropy_of_counts,
    is_coarsening,
    is_consistent,
    is_proportional,
    joint_entropy_check,
    partition_entropy,
)
from .stats import ClusterStats, GaussianModel, gaussian_entropy, model_of
from .thresholds import (
    MergeScenario,
    beta0_gaussian_halves,
    beta_threshold,
    empirical_beta_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "CECIB",
    "CecibError",
    "Clustering",
    "ClusterStats",
    "ConfigurationError",
    "CostBreakdown",
    "CsvParseError",
    "Dataset",
    "DegenerateModelError",
    "DegenerateScenarioError",
    "EmptyClusterError",
    "FitConfig",
    "FitReport",
    "GaussianModel",
    "HartiganState",
    "LabelProtocol",
    "MergeScenario",
    "SideInfo",
    "UnsupportedSettingError",
    "beta0_gaussian_halves",
    "beta_threshold",
    "cec_cost",
    "cecib_cost",
    "cluster_cost",
    "cluster_cost_from_stats",
    "conditional_cross_entropy",
    "conditional_entropy",
    "contingency",
    "default_ridge",
    "empirical_beta_threshold",
    "entropy_of_counts",
    "fit",
    "gaussian_entropy",
    "gaussian_mixture_sample",
    "is_coarsening",
    "is_consistent",
    "is_proportional",
    "joint_entropy_check",
    "load_csv",
    "model_of",
    "move_delta",
    "nmi",
    "partition_entropy",
    "pca_basis",
    "pca_reduce",
    "run_protocol_grid",
    "sample_side_info",
]
