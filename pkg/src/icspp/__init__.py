"""Invariant coordinate selection refined by local projection pursuit.

Find low-dimensional linear views of multivariate data that look far from
Gaussian: whiten, rotate into the eigenbasis of a robust second scatter,
then descend a kernel entropy estimate over rotations of the projection.
"""

from .data import CENTERED, CURRENT, ICS, PREWHITENED, RAW, DataSet
from .entropy import (EntropyIndex, ProjectionIndex, entropy_and_gradient,
                      entropy_gradient, entropy_pointwise_gradients,
                      estimate_entropy, gaussian_reference_entropy,
                      index_gradient, kernel_density)
from .errors import (DegeneratePairs, DimensionMismatch, InvalidIndices,
                     InvalidSpec, NotPositiveDefinite, ParseError,
                     PursuitError, SingularDesign, TooFewRows)
from .linalg import (SpectralDecomp, SvdFactors, anti_sym_split,
                     frobenius_inner, random_orthogonal, spectral_decompose,
                     structured_exp, sym_inverse_sqrt, thin_svd)
from .optimizer import (IterationRecord, LocalPPResult, OptimizerConfig,
                        PPTrace, Termination, armijo_accept, component_order,
                        local_pp, permute_components)
from .pipeline import (ALL_PAIRS, BEST_INITIAL, EXPLICIT, GLOBAL_PP,
                       ICS_ADJACENT, ICS_ONLY, ICS_THEN_PP, PipelineConfig,
                       PipelineResult, StagewiseTransforms, StartRecord,
                       enumerate_starts, ics_rotate, prewhiten, recover_B,
                       run_pipeline)
from .scatter import (TRACE_P, UNNORMALIZED, ScatterConfig, center,
                      one_step_m_scatter, sample_covariance)
from .synthetic import (CIRCLE, CLUSTERS, GAUSSIAN, HYPERPLANES,
                        GeneratorSpec, LabeledDataSet, generate,
                        recovery_score, subspace_alignment)

__version__ = "0.1.0"

__all__ = [
    "DataSet", "RAW", "CENTERED", "PREWHITENED", "ICS", "CURRENT",
    "spectral_decompose", "sym_inverse_sqrt", "thin_svd", "structured_exp",
    "anti_sym_split", "frobenius_inner", "random_orthogonal",
    "SpectralDecomp", "SvdFactors",
    "ScatterConfig", "center", "sample_covariance", "one_step_m_scatter",
    "TRACE_P", "UNNORMALIZED",
    "estimate_entropy", "kernel_density", "gaussian_reference_entropy",
    "entropy_gradient", "entropy_and_gradient", "entropy_pointwise_gradients",
    "ProjectionIndex", "EntropyIndex", "index_gradient",
    "OptimizerConfig", "LocalPPResult", "PPTrace", "IterationRecord",
    "Termination", "armijo_accept", "component_order", "permute_components",
    "local_pp",
    "PipelineConfig", "PipelineResult", "StartRecord", "StagewiseTransforms",
    "run_pipeline", "prewhiten", "ics_rotate", "enumerate_starts", "recover_B",
    "ICS_THEN_PP", "GLOBAL_PP", "ICS_ONLY",
    "ALL_PAIRS", "ICS_ADJACENT", "BEST_INITIAL", "EXPLICIT",
    "GeneratorSpec", "LabeledDataSet", "generate", "recovery_score",
    "subspace_alignment", "CLUSTERS", "CIRCLE", "HYPERPLANES", "GAUSSIAN",
    "PursuitError", "NotPositiveDefinite", "DimensionMismatch",
    "InvalidIndices", "DegeneratePairs", "SingularDesign", "InvalidSpec",
    "ParseError", "TooFewRows",
]
