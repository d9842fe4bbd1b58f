"""Recursive max-linear models on DAGs: simulation, identification,
spectral estimation, causal-order learning, and asymptotics.

The public API re-exports the stable names from each submodule; the
``maxlinear`` console script in :mod:`maxlinear.cli` wraps the
:mod:`maxlinear.pipeline` commands.
"""

from ._kernels import active_backend
from .asymptotics import (
    recovery_variance_positive,
    scaling_covariance,
    scaling_covariance_entry,
    singleton_direction,
    transform_covariance,
)
from .dag import (
    DagStructure,
    GenerationPartition,
    path_coefficients,
    validate_edge_weights,
)
from .errors import (
    CyclicGraphError,
    EmptyGenerationError,
    FileFormatError,
    MaxLinearError,
    NoInitialNodeError,
    ThresholdError,
    ValidationError,
)
from .estimation import (
    EstimationConfig,
    PolarSample,
    default_threshold_count,
    empirical_frechet_transform,
    estimate_max_scaling,
    estimate_rescaled_max_scaling,
    frechet_mle_scaling,
    negative_part,
    polar_decompose,
    scaling_from_polar,
)
from .identify import (
    RecoveredCoefficients,
    TransformMatrix,
    build_transform,
    coefficients_from_squares,
    index_pairs,
    scaling_vector,
    squared_coefficients,
    squared_coefficients_recursive,
    subset_at,
    vector_index,
    vector_length,
)
from .model import (
    InnovationSpec,
    SpectralAtoms,
    as_coefficient_matrix,
    extreme_dependence_measure,
    is_standardized,
    max_matrix_product,
    max_scaling,
    pair_scaling,
    rescaled_max_scaling,
    simulate,
    spectral_atoms,
    spectral_expectation,
    standardize,
)
from .ordering import (
    DeltaPass,
    ExactScalings,
    FrechetMleScalings,
    LearnResult,
    ReorderConfig,
    ScalingProvider,
    SpectralScalings,
    initial_nodes_pairwise,
    initial_nodes_threshold,
    learn_generations,
    learn_order,
    next_generation_threshold,
    next_node_argmax,
    unrelated_pair,
)
from .pipeline import (
    ExtremesConfig,
    LearnConfig,
    SimulateConfig,
    StudyConfig,
    TransformConfig,
    run_extremes,
    run_learn,
    run_simulate,
    run_study,
    run_transform,
    scaling_vector_from_provider,
)
from .presets import (
    TEN_NODE_EDGES,
    TEN_NODE_GENERATIONS,
    random_standardized_model,
    random_weights,
    random_well_ordered_dag,
    ten_node_dag,
    ten_node_model,
    ten_node_weights,
    unit_weights,
)

__version__ = "0.1.0"

__all__ = [
    "CyclicGraphError",
    "DagStructure",
    "DeltaPass",
    "EmptyGenerationError",
    "EstimationConfig",
    "ExactScalings",
    "ExtremesConfig",
    "FileFormatError",
    "FrechetMleScalings",
    "GenerationPartition",
    "InnovationSpec",
    "LearnConfig",
    "LearnResult",
    "MaxLinearError",
    "NoInitialNodeError",
    "PolarSample",
    "RecoveredCoefficients",
    "ReorderConfig",
    "ScalingProvider",
    "SimulateConfig",
    "SpectralAtoms",
    "SpectralScalings",
    "StudyConfig",
    "TEN_NODE_EDGES",
    "TEN_NODE_GENERATIONS",
    "ThresholdError",
    "TransformConfig",
    "TransformMatrix",
    "ValidationError",
    "active_backend",
    "as_coefficient_matrix",
    "build_transform",
    "coefficients_from_squares",
    "default_threshold_count",
    "empirical_frechet_transform",
    "estimate_max_scaling",
    "estimate_rescaled_max_scaling",
    "extreme_dependence_measure",
    "frechet_mle_scaling",
    "index_pairs",
    "initial_nodes_pairwise",
    "initial_nodes_threshold",
    "is_standardized",
    "learn_generations",
    "learn_order",
    "max_matrix_product",
    "max_scaling",
    "negative_part",
    "next_generation_threshold",
    "next_node_argmax",
    "pair_scaling",
    "path_coefficients",
    "polar_decompose",
    "random_standardized_model",
    "random_weights",
    "random_well_ordered_dag",
    "recovery_variance_positive",
    "rescaled_max_scaling",
    "run_extremes",
    "run_learn",
    "run_simulate",
    "run_study",
    "run_transform",
    "scaling_covariance",
    "scaling_covariance_entry",
    "scaling_from_polar",
    "scaling_vector",
    "scaling_vector_from_provider",
    "simulate",
    "singleton_direction",
    "spectral_atoms",
    "spectral_expectation",
    "squared_coefficients",
    "squared_coefficients_recursive",
    "standardize",
    "subset_at",
    "ten_node_dag",
    "ten_node_model",
    "ten_node_weights",
    "transform_covariance",
    "unit_weights",
    "unrelated_pair",
    "validate_edge_weights",
    "vector_index",
    "vector_length",
]
